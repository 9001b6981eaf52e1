//! Rating-matrix pipeline: fill missing ratings by alternating least squares,
//! reduce with PCA, sample users as arms and run SoftUCB on the result.
//!
//! A real ratings CSV (first row a header, one row per user, empty fields for
//! missing ratings) can be passed as the first argument; otherwise a
//! synthetic low-rank matrix with gaps is generated.
//!
//!     cargo run --release --example dataset_ingest -- [ratings.csv]

use nalgebra::DMatrix;
use rand::Rng;
use softucb::env::{build_dataset_env, factorize_impute, NoiseModel, RatingMatrix};
use softucb::rng::{stream, Purpose};
use softucb::runners::{run_linucb, run_softucb, RunConfig};

fn synthetic_ratings() -> softucb::Result<RatingMatrix> {
    let mut rng = stream(3, Purpose::Dataset);
    let users: DMatrix<f64> = DMatrix::from_fn(400, 6, |_, _| rng.random_range(-1.0..1.0));
    let items: DMatrix<f64> = DMatrix::from_fn(40, 6, |_, _| rng.random_range(-1.0..1.0));
    let values = (users * items.transpose()).map(|v| (v * 3.0).clamp(-10.0, 10.0));
    let mask = DMatrix::from_fn(400, 40, |_, _| rng.random_range(0.0..1.0) < 0.7);
    RatingMatrix::new(values, mask, (1..=40).map(|j| format!("joke{j}")).collect())
}

fn main() -> softucb::Result<()> {
    let ratings = match std::env::args().nth(1) {
        Some(path) => RatingMatrix::from_csv_path(path.as_ref())?,
        None => synthetic_ratings()?,
    };
    println!(
        "{} users × {} items, {:.1}% observed",
        ratings.rows(),
        ratings.cols(),
        100.0 * ratings.observed_count() as f64 / (ratings.rows() * ratings.cols()) as f64
    );

    let complete = if ratings.is_complete() {
        ratings
    } else {
        let fit = factorize_impute(&ratings, 10, 0.1, 100, 0)?;
        println!(
            "ALS: observed RMSE {:.4} → {:.4}",
            fit.rmse_history[0],
            fit.rmse_history.last().unwrap()
        );
        fit.completed
    };

    let held_out = complete.cols() - 1;
    let dataset = build_dataset_env(
        &complete,
        held_out,
        50,
        10,
        0,
        NoiseModel::Gaussian { sigma: 0.5 },
    )?;
    let env = &dataset.env;
    println!(
        "arms: {} users, d = {}, best mean {:.3}",
        env.num_arms(),
        env.dim(),
        env.best_mean()
    );

    let config = RunConfig {
        horizon: 1024,
        ..Default::default()
    };
    let soft = run_softucb(env, &config, 0.5, &mut stream(0, Purpose::Run))?;
    let lin = run_linucb(env, &config, &mut stream(0, Purpose::Run))?;
    println!(
        "regret at T: softucb(β = 0.5) {:.2}, linucb {:.2}",
        soft.final_regret(),
        lin.final_regret()
    );
    Ok(())
}
