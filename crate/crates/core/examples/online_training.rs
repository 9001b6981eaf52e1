//! Online width learning within a single trajectory.
//!
//!     cargo run --release --example online_training -- [seed]

use softucb::env::make_synthetic;
use softucb::gradient::OnlineMode;
use softucb::rng::{stream, Purpose};
use softucb::runners::{train_online, RunConfig};

fn main() -> softucb::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .map_or(0, |s| s.parse().expect("numeric seed"));
    let env = make_synthetic(50, 10, 0.5, seed)?;

    // The online estimator averages over the horizon, so its multiplier is
    // much larger than the offline one.
    for mode in [OnlineMode::Cached, OnlineMode::Recompute] {
        let config = RunConfig {
            horizon: 1024,
            eta: 1.0,
            learning_rate: 0.05,
            online_mode: mode,
            ..Default::default()
        };
        let run = train_online(&env, &config, &mut stream(seed, Purpose::Run))?;
        println!(
            "{mode:?}: uniform rounds {}",
            run.diagnostics.uniform_rounds
        );
        for t in [1, 8, 64, 256, 512, 768, 1024] {
            let step = &run.beta_trace[t - 1];
            println!(
                "  round {t:>5}  β = {:.4}  regret so far = {:.2}",
                step.beta,
                run.expected_regret_curve[t - 1]
            );
        }
    }
    Ok(())
}
