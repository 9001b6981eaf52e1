use rand::Rng;

use super::softucb::{run_trajectory, Width};
use super::{converged_at, BetaStep, RunConfig, RunResult};
use crate::env::Environment;
use crate::error::Result;
use crate::gradient::{offline_gradient, update_beta, BetaParam};

/// Outcome of offline width training.
#[derive(Debug, Clone, PartialEq)]
pub struct OfflineTraining {
    pub beta_hat: f64,
    /// One entry per training trajectory.
    pub beta_trace: Vec<BetaStep>,
    /// The training trajectories, logs dropped unless
    /// [`RunConfig::keep_training_logs`] is set.
    pub traces: Vec<RunResult>,
    /// Iteration at which the convergence window was first met.
    pub converged_at: Option<usize>,
}

/// Learns `β` over repeated trajectories on the same arm set, starting from
/// `β₀ = 0` and stepping along the offline gradient after each trajectory.
pub fn train_offline<R: Rng + ?Sized>(
    env: &Environment,
    config: &RunConfig,
    rng: &mut R,
) -> Result<OfflineTraining> {
    config.validate()?;
    let mut param = BetaParam::new(0.0, config.eta, config.learning_rate, config.schedule)?;
    let mut beta_trace = Vec::with_capacity(config.trajectories);
    let mut traces = Vec::with_capacity(config.trajectories);
    let mut converged = None;

    for n in 1..=config.trajectories {
        let mut run = run_trajectory(env, config, Width::Fixed(param.beta), true, rng)?;
        let gradient = offline_gradient(&run.log, config.eta)?;
        param = update_beta(param, gradient, n as u64);
        beta_trace.push(BetaStep {
            iteration: n,
            beta: param.beta,
            gradient,
        });
        if !config.keep_training_logs {
            run.log.records = Vec::new();
        }
        traces.push(run);

        if converged.is_none() {
            converged = converged_at(0.0, &beta_trace);
            if converged.is_some() && config.stop_at_convergence {
                break;
            }
        }
    }

    Ok(OfflineTraining {
        beta_hat: param.beta,
        beta_trace,
        traces,
        converged_at: converged,
    })
}

/// Learns `β` within a single trajectory, updating after every round from
/// `β₀ = 0`. The returned trace has one entry per round.
pub fn train_online<R: Rng + ?Sized>(
    env: &Environment,
    config: &RunConfig,
    rng: &mut R,
) -> Result<RunResult> {
    config.validate()?;
    let param = BetaParam::new(0.0, config.eta, config.learning_rate, config.schedule)?;
    run_trajectory(
        env,
        config,
        Width::Online {
            param,
            mode: config.online_mode,
        },
        true,
        rng,
    )
}
