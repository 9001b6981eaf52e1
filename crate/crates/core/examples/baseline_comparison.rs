//! SoftUCB with a trained width against LinUCB, LinTS and ε-greedy on the
//! same instances and random streams.
//!
//!     cargo run --release --example baseline_comparison -- [seeds]

use rayon::prelude::*;
use softucb::env::make_synthetic;
use softucb::gradient::Schedule;
use softucb::harness::mean_stderr;
use softucb::rng::{stream, Purpose};
use softucb::runners::{
    run_epsilon_greedy, run_lints, run_linucb, run_softucb, train_offline, RunConfig,
};

fn main() -> softucb::Result<()> {
    let seeds: u64 = std::env::args()
        .nth(1)
        .map_or(5, |s| s.parse().expect("numeric seed count"));
    let config = RunConfig {
        horizon: 1024,
        trajectories: 300,
        eta: 0.003,
        schedule: Schedule::RobbinsMonro,
        learning_rate: 0.005,
        ..Default::default()
    };

    let rows: Vec<[f64; 4]> = (0..seeds)
        .into_par_iter()
        .map(|s| -> softucb::Result<[f64; 4]> {
            let env = make_synthetic(50, 10, 0.5, s)?;
            let beta = train_offline(&env, &config, &mut stream(s, Purpose::Training))?.beta_hat;
            let rng = || stream(s, Purpose::Run);
            Ok([
                run_softucb(&env, &config, beta, &mut rng())?.final_regret(),
                run_linucb(&env, &config, &mut rng())?.final_regret(),
                run_lints(&env, &config, &mut rng())?.final_regret(),
                run_epsilon_greedy(&env, &config, &mut rng())?.final_regret(),
            ])
        })
        .collect::<softucb::Result<_>>()?;

    println!("cumulative expected regret at T = 1024 over {seeds} seeds");
    for (k, name) in ["softucb (trained)", "linucb", "lints", "eps-greedy"]
        .iter()
        .enumerate()
    {
        let values: Vec<f64> = rows.iter().map(|r| r[k]).collect();
        let (mean, se) = mean_stderr(&values);
        println!("  {name:<18} {mean:>8.2} ± {se:.2}");
    }
    Ok(())
}
