//! Offline width learning on a synthetic instance, compared with the
//! theoretical width.
//!
//!     cargo run --release --example offline_training -- [dim] [horizon] [seed]

use softucb::env::make_synthetic;
use softucb::gradient::Schedule;
use softucb::rng::{stream, Purpose};
use softucb::runners::{run_softucb, theoretical_beta, train_offline, RunConfig};

fn main() -> softucb::Result<()> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let dim = args.first().copied().unwrap_or(5);
    let horizon = args.get(1).copied().unwrap_or(256);
    let seed = args.get(2).copied().unwrap_or(0) as u64;

    let env = make_synthetic(50, dim, 0.5, seed)?;
    let config = RunConfig {
        horizon,
        trajectories: 300,
        eta: 0.003,
        schedule: Schedule::RobbinsMonro,
        learning_rate: 5.0 / horizon as f64,
        ..Default::default()
    };
    let training = train_offline(&env, &config, &mut stream(seed, Purpose::Training))?;

    for step in training.beta_trace.iter().filter(|s| s.iteration % 30 == 0) {
        let regret = training.traces[step.iteration - 1].final_regret();
        println!(
            "iter {:>4}  β = {:.4}  gradient = {:>9.3}  regret = {regret:.2}",
            step.iteration, step.beta, step.gradient
        );
    }
    match training.converged_at {
        Some(n) => println!("converged at iteration {n}"),
        None => println!("did not meet the convergence window"),
    }

    let theory = theoretical_beta(0.5, 0.1, dim, horizon, 1.0, 1.0)?;
    println!(
        "learned β = {:.4}, theoretical β = {theory:.4}, ratio {:.3}",
        training.beta_hat,
        training.beta_hat / theory
    );
    for (label, beta) in [("learned", training.beta_hat), ("theoretical", theory)] {
        let run = run_softucb(&env, &config, beta, &mut stream(seed, Purpose::Run))?;
        println!("regret at T with {label} width: {:.2}", run.final_regret());
    }
    Ok(())
}
