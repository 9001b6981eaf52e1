//! Score-function gradients of the expected cumulative reward with respect to
//! the confidence width `β`, and the gradient-ascent update of `β`.
//!
//! Within a round the policy is `pᵢ(β) ∝ exp(γ (β φᵢ − Δ̂ᵢ))` with `γ`, `φ`
//! and `Δ̂` held fixed, so `∂ log pᵢ / ∂β = γ φᵢ − γ Σⱼ φⱼ pⱼ`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Step-size schedule for the `β` updates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Schedule {
    #[default]
    Constant,
    /// `λ / n` at iteration `n`.
    RobbinsMonro,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParam {
    pub beta: f64,
    /// Lagrange multiplier on the confidence constraint.
    pub eta: f64,
    pub learning_rate: f64,
    pub schedule: Schedule,
}

impl BetaParam {
    pub fn new(beta: f64, eta: f64, learning_rate: f64, schedule: Schedule) -> Result<Self> {
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(invalid(format!("beta must be nonnegative, got {beta}")));
        }
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(invalid(format!("eta must be positive, got {eta}")));
        }
        if !(learning_rate >= 0.0 && learning_rate.is_finite()) {
            return Err(invalid(format!(
                "learning_rate must be nonnegative, got {learning_rate}"
            )));
        }
        Ok(Self {
            beta,
            eta,
            learning_rate,
            schedule,
        })
    }

    pub fn step_size(&self, iteration: u64) -> f64 {
        match self.schedule {
            Schedule::Constant => self.learning_rate,
            Schedule::RobbinsMonro => self.learning_rate / iteration.max(1) as f64,
        }
    }
}

/// One gradient-ascent step, clamped so that `β ≥ 0`.
pub fn update_beta(param: BetaParam, gradient: f64, iteration: u64) -> BetaParam {
    let beta = (param.beta + param.step_size(iteration) * gradient).max(0.0);
    BetaParam { beta, ..param }
}

/// Everything about one round needed to evaluate the gradient estimators.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub probs: Vec<f64>,
    pub s_values: Vec<f64>,
    pub phi: Vec<f64>,
    pub delta_hat: Vec<f64>,
    pub norms: Vec<f64>,
    pub mu_hat: Vec<f64>,
    pub gamma: f64,
    pub beta: f64,
    pub chosen: usize,
    pub reward: f64,
}

impl RoundRecord {
    pub fn num_arms(&self) -> usize {
        self.probs.len()
    }

    /// `γ Σⱼ φⱼ pⱼ`, the baseline subtracted from every score.
    fn mean_score(&self) -> f64 {
        self.gamma
            * self
                .phi
                .iter()
                .zip(&self.probs)
                .map(|(f, p)| f * p)
                .sum::<f64>()
    }

    /// `Σᵢ vᵢ pᵢ ∂log pᵢ/∂β` for arbitrary per-arm values `v`.
    pub fn weighted_score(&self, values: &[f64]) -> f64 {
        let baseline = self.mean_score();
        values
            .iter()
            .zip(&self.probs)
            .zip(&self.phi)
            .map(|((v, p), f)| v * p * (self.gamma * f - baseline))
            .sum()
    }

    /// `Σᵢ ‖xᵢ‖_{V⁻¹}` over all arms.
    pub fn norm_sum(&self) -> f64 {
        self.norms.iter().sum()
    }
}

/// The records of one completed trajectory.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrajectoryLog {
    pub records: Vec<RoundRecord>,
}

impl TrajectoryLog {
    pub fn with_capacity(horizon: usize) -> Self {
        Self {
            records: Vec::with_capacity(horizon),
        }
    }

    pub fn horizon(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn push(&mut self, record: RoundRecord) {
        self.records.push(record);
    }
}

/// `∂ log pᵢ / ∂β` for arm `i` of `record`.
pub fn grad_log_prob(record: &RoundRecord, i: usize) -> f64 {
    record.gamma * record.phi[i] - record.mean_score()
}

/// `Σᵢ μ̂ᵢ pᵢ ∂log pᵢ/∂β` for one round.
pub fn round_contribution(record: &RoundRecord) -> f64 {
    record.weighted_score(&record.mu_hat)
}

/// Offline estimator: `Σₜ Σᵢ [ pᵢ μ̂ᵢ ∂log pᵢ/∂β + η ‖xᵢ‖ ]`.
pub fn offline_gradient(log: &TrajectoryLog, eta: f64) -> Result<f64> {
    if log.is_empty() {
        return Err(invalid("cannot take a gradient over an empty trajectory"));
    }
    Ok(log
        .records
        .iter()
        .map(|r| round_contribution(r) + eta * r.norm_sum())
        .sum())
}

/// Same as [`offline_gradient`] with the true means in place of `μ̂`.
/// Only available where the environment exposes its means.
pub fn exact_gradient(log: &TrajectoryLog, true_means: &[f64], eta: f64) -> Result<f64> {
    if log.is_empty() {
        return Err(invalid("cannot take a gradient over an empty trajectory"));
    }
    if let Some(r) = log
        .records
        .iter()
        .find(|r| r.num_arms() != true_means.len())
    {
        return Err(invalid(format!(
            "record has {} arms but {} true means were given",
            r.num_arms(),
            true_means.len()
        )));
    }
    Ok(log
        .records
        .iter()
        .map(|r| r.weighted_score(true_means) + eta * r.norm_sum())
        .sum())
}

/// `Σₜ Σᵢ pᵢₜ μ̂ᵢₜ` on the recorded policies.
pub fn offline_objective(log: &TrajectoryLog) -> f64 {
    log.records
        .iter()
        .map(|r| {
            r.probs
                .iter()
                .zip(&r.mu_hat)
                .map(|(p, m)| p * m)
                .sum::<f64>()
        })
        .sum()
}

/// How past rounds enter the online gradient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum OnlineMode {
    /// Each round's score term is computed once, under the `β` in force then.
    #[default]
    Cached,
    /// Every past round is re-evaluated under the current `β` (frozen γ, φ, Δ̂).
    Recompute,
}

/// Running sum of past per-round contributions for the online estimator.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct OnlineAccumulator {
    pub sum: f64,
}

/// Online estimator at round `t` of `horizon`:
/// `(Σ_{s≤t} cₛ + (T − t) cₜ + η Σᵢ ‖xᵢ‖ₜ) / T`, where `cₛ` is the round
/// contribution. Returns the gradient and the advanced accumulator.
pub fn online_gradient(
    accumulator: OnlineAccumulator,
    record: &RoundRecord,
    t: usize,
    horizon: usize,
    eta: f64,
) -> (f64, OnlineAccumulator) {
    debug_assert!(t >= 1 && t <= horizon);
    let c = round_contribution(record);
    let next = OnlineAccumulator {
        sum: accumulator.sum + c,
    };
    let remaining = horizon.saturating_sub(t) as f64;
    let gradient = (next.sum + remaining * c + eta * record.norm_sum()) / horizon as f64;
    (gradient, next)
}

/// Re-evaluates a round's policy at confidence width `beta` with its coldness,
/// widths and gaps held fixed.
pub fn reevaluate(record: &RoundRecord, beta: f64) -> RoundRecord {
    let s_values: Vec<f64> = record
        .phi
        .iter()
        .zip(&record.delta_hat)
        .map(|(f, d)| beta * f - d)
        .collect();
    let probs = crate::policy::softmax(&s_values, record.gamma);
    RoundRecord {
        probs,
        s_values,
        beta,
        ..record.clone()
    }
}

/// Online estimator with every past contribution recomputed at `beta`.
/// `history` holds rounds `1..=t`, the last entry being round `t`.
pub fn online_gradient_recompute(
    history: &[RoundRecord],
    beta: f64,
    horizon: usize,
    eta: f64,
) -> f64 {
    let t = history.len();
    debug_assert!(t >= 1 && t <= horizon);
    let past: f64 = history
        .iter()
        .map(|r| round_contribution(&reevaluate(r, beta)))
        .sum();
    let current = &history[t - 1];
    let c = round_contribution(&reevaluate(current, beta));
    let remaining = horizon.saturating_sub(t) as f64;
    (past + remaining * c + eta * current.norm_sum()) / horizon as f64
}
