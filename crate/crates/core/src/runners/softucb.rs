use rand::Rng;

use super::{BetaStep, RunConfig, RunResult};
use crate::env::Environment;
use crate::error::{invalid, Result};
use crate::gradient::{
    online_gradient, online_gradient_recompute, update_beta, BetaParam, OnlineAccumulator,
    OnlineMode, RoundRecord, TrajectoryLog,
};
use crate::linalg::RidgeState;
use crate::policy::{compute_gamma, compute_indices, sample_arm, softmax_policy, GAMMA_CAP};

/// How the width evolves during a trajectory.
pub(crate) enum Width {
    Fixed(f64),
    Online { param: BetaParam, mode: OnlineMode },
}

/// SoftUCB for `config.horizon` rounds with the fixed width `beta`.
///
/// Each round computes the indices with `β`, forms the policy with the
/// coldness left by the previous round, samples and observes, updates the
/// ridge state, then recomputes the coldness on the updated state.
pub fn run_softucb<R: Rng + ?Sized>(
    env: &Environment,
    config: &RunConfig,
    beta: f64,
    rng: &mut R,
) -> Result<RunResult> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(invalid(format!("beta must be nonnegative, got {beta}")));
    }
    run_trajectory(env, config, Width::Fixed(beta), true, rng)
}

pub(crate) fn run_trajectory<R: Rng + ?Sized>(
    env: &Environment,
    config: &RunConfig,
    width: Width,
    keep_log: bool,
    rng: &mut R,
) -> Result<RunResult> {
    config.validate()?;
    let horizon = config.horizon;
    let arms = env.arms();
    let true_means = env.means();
    let mut state = RidgeState::new(arms.dim(), config.alpha)?;
    let mut norms = state.norms(arms);
    let mut mu_hat = state.means(arms);

    let (mut beta, mut online) = match width {
        Width::Fixed(b) => (b, None),
        Width::Online { param, mode } => (param.beta, Some((param, mode))),
    };
    let keep_log = keep_log || matches!(online, Some((_, OnlineMode::Recompute)));

    let mut result = RunResult::with_capacity(horizon);
    if keep_log {
        result.log = TrajectoryLog::with_capacity(horizon);
    }
    let mut accumulator = OnlineAccumulator::default();
    let mut gamma = 0.0;

    for t in 1..=horizon {
        let snapshot = compute_indices(&mu_hat, &norms, beta)?;
        let diag = &mut result.diagnostics;
        diag.constraint_violations += (0..arms.len())
            .filter(|&i| (mu_hat[i] - true_means[i]).abs() > beta * norms[i])
            .count();
        if snapshot.lower_set.is_empty() {
            diag.empty_lower_rounds += 1;
        }
        if gamma == 0.0 {
            diag.uniform_rounds += 1;
        }
        if gamma >= GAMMA_CAP {
            diag.gamma_cap_events += 1;
        }

        let policy = softmax_policy(&snapshot, gamma);
        let arm = sample_arm(&policy, rng);
        let reward = env.draw_reward(arm, rng);
        result.push_round(env.expected_regret(&policy), reward);

        let record = RoundRecord {
            probs: policy.probs,
            s_values: snapshot.s_values,
            phi: snapshot.phi,
            delta_hat: snapshot.delta_hat,
            norms: snapshot.norms,
            mu_hat: snapshot.mu_hat,
            gamma,
            beta,
            chosen: arm,
            reward,
        };
        state.update(arms.arm(arm), reward)?;

        if let Some((param, mode)) = online.as_mut() {
            let gradient = match mode {
                OnlineMode::Cached => {
                    let (g, next) = online_gradient(accumulator, &record, t, horizon, param.eta);
                    accumulator = next;
                    g
                }
                OnlineMode::Recompute => {
                    result.log.push(record.clone());
                    online_gradient_recompute(&result.log.records, beta, horizon, param.eta)
                }
            };
            *param = update_beta(*param, gradient, t as u64);
            beta = param.beta;
            result.beta_trace.push(BetaStep {
                iteration: t,
                beta,
                gradient,
            });
            if *mode == OnlineMode::Cached && keep_log {
                result.log.push(record);
            }
        } else if keep_log {
            result.log.push(record);
        }

        norms = state.norms(arms);
        mu_hat = state.means(arms);
        let next = compute_indices(&mu_hat, &norms, beta)?;
        gamma = compute_gamma(&next, config.delta)?;
    }
    Ok(result)
}
