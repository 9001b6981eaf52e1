//! Trajectory runners: SoftUCB with a fixed width, offline and online width
//! training, and the LinUCB / LinTS / ε-greedy baselines.
//!
//! Every runner records its per-round policy so that expected regret
//! `Σₜ (μ* − Σᵢ pᵢₜ μᵢ)` is computed the same way for all algorithms.

mod baselines;
mod softucb;
mod theory;
mod training;

pub use baselines::{lints_scale, run_epsilon_greedy, run_lints, run_linucb, sample_posterior};
pub use softucb::run_softucb;
pub use theory::{elliptical_potential_bound, regret_bound, theoretical_beta};
pub use training::{train_offline, train_online, OfflineTraining};

use crate::error::{invalid, Result};
use crate::gradient::{OnlineMode, Schedule, TrajectoryLog};

/// Convergence window: this many consecutive updates…
pub const CONVERGENCE_WINDOW: usize = 10;
/// …each moving `β` by less than this.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-3;

/// Parameters of the width bound used by LinUCB and LinTS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    /// Sub-Gaussian scale `R` of the reward noise.
    pub noise_scale: f64,
    /// Failure probability of the bound.
    pub delta: f64,
    /// Bound `C ≥ ‖θ‖₂`.
    pub theta_bound: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        Self {
            noise_scale: 0.5,
            delta: 0.1,
            theta_bound: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub horizon: usize,
    /// Probability mass the coldness reserves for the upper set.
    pub delta: f64,
    pub alpha: f64,
    /// Width for fixed-β runs.
    pub beta: f64,
    pub trajectories: usize,
    pub learning_rate: f64,
    pub eta: f64,
    pub schedule: Schedule,
    pub online_mode: OnlineMode,
    pub epsilon: f64,
    pub bound: BoundParams,
    /// Overrides the LinUCB width (defaults to the theoretical bound).
    pub linucb_beta: Option<f64>,
    /// Overrides the LinTS posterior inflation (see [`lints_scale`]).
    pub lints_scale: Option<f64>,
    /// Keep full per-round logs of offline training trajectories.
    pub keep_training_logs: bool,
    /// Stop offline training once the convergence window is met.
    pub stop_at_convergence: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            horizon: 1024,
            delta: 0.99,
            alpha: 1.0,
            beta: 1.0,
            trajectories: 100,
            learning_rate: 0.05,
            eta: 0.01,
            schedule: Schedule::Constant,
            online_mode: OnlineMode::Cached,
            epsilon: 0.05,
            bound: BoundParams::default(),
            linucb_beta: None,
            lints_scale: None,
            keep_training_logs: false,
            stop_at_convergence: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(invalid("horizon must be at least 1"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(invalid(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(invalid(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(invalid(format!(
                "beta must be nonnegative, got {}",
                self.beta
            )));
        }
        if self.trajectories == 0 {
            return Err(invalid("trajectories must be at least 1"));
        }
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(invalid(format!(
                "learning_rate must be nonnegative, got {}",
                self.learning_rate
            )));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(invalid(format!("eta must be positive, got {}", self.eta)));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(invalid(format!(
                "epsilon must lie in [0, 1], got {}",
                self.epsilon
            )));
        }
        let b = &self.bound;
        if !(b.noise_scale >= 0.0 && b.theta_bound >= 0.0) {
            return Err(invalid(
                "bound noise_scale and theta_bound must be nonnegative",
            ));
        }
        if !(b.delta > 0.0 && b.delta < 1.0) {
            return Err(invalid(format!(
                "bound delta must lie in (0, 1), got {}",
                b.delta
            )));
        }
        Ok(())
    }
}

/// One `β` update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaStep {
    pub iteration: usize,
    /// Width after the update.
    pub beta: f64,
    pub gradient: f64,
}

/// Per-run diagnostic counters.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Diagnostics {
    /// Rounds whose policy ran at the coldness cap.
    pub gamma_cap_events: usize,
    /// `(i, t)` pairs where `|μ̂ᵢₜ − μᵢ| > β ‖xᵢ‖ₜ`.
    pub constraint_violations: usize,
    /// Rounds whose policy was uniform because γ was zero.
    pub uniform_rounds: usize,
    /// Rounds with an empty lower set.
    pub empty_lower_rounds: usize,
}

impl Diagnostics {
    pub fn constraint_held(&self) -> bool {
        self.constraint_violations == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    /// Cumulative expected regret after each round.
    pub expected_regret_curve: Vec<f64>,
    /// Cumulative realized reward after each round.
    pub realized_reward_curve: Vec<f64>,
    pub beta_trace: Vec<BetaStep>,
    /// Per-round records; SoftUCB runs only.
    pub log: TrajectoryLog,
    pub diagnostics: Diagnostics,
}

impl RunResult {
    pub(crate) fn with_capacity(horizon: usize) -> Self {
        Self {
            expected_regret_curve: Vec::with_capacity(horizon),
            realized_reward_curve: Vec::with_capacity(horizon),
            beta_trace: Vec::new(),
            log: TrajectoryLog::default(),
            diagnostics: Diagnostics::default(),
        }
    }

    pub(crate) fn push_round(&mut self, regret: f64, reward: f64) {
        let r = self.expected_regret_curve.last().copied().unwrap_or(0.0) + regret;
        let y = self.realized_reward_curve.last().copied().unwrap_or(0.0) + reward;
        self.expected_regret_curve.push(r);
        self.realized_reward_curve.push(y);
    }

    /// Cumulative expected regret at the horizon.
    pub fn final_regret(&self) -> f64 {
        self.expected_regret_curve.last().copied().unwrap_or(0.0)
    }
}

/// First iteration at which the last [`CONVERGENCE_WINDOW`] updates all moved
/// `β` by less than [`CONVERGENCE_TOLERANCE`]. `start` is the width before the
/// first step.
pub fn converged_at(start: f64, trace: &[BetaStep]) -> Option<usize> {
    let mut prev = start;
    let mut run = 0;
    for step in trace {
        if (step.beta - prev).abs() < CONVERGENCE_TOLERANCE {
            run += 1;
            if run >= CONVERGENCE_WINDOW {
                return Some(step.iteration);
            }
        } else {
            run = 0;
        }
        prev = step.beta;
    }
    None
}
