//! The SoftUCB index, the suboptimal/non-suboptimal partition, the softmax
//! coldness and the arm-selection distribution.
//!
//! For confidence width `β`, the leader `i*` maximizes the lower confidence
//! bound `μ̂ᵢ − β‖xᵢ‖`. Each arm then gets
//!
//! ```text
//! φᵢ = ‖xᵢ‖ + ‖x_{i*}‖,   Δ̂ᵢ = μ̂_{i*} − μ̂ᵢ,   Sᵢ = β φᵢ − Δ̂ᵢ
//! ```
//!
//! Arms with `Sᵢ < 0` form the lower set (provably suboptimal when the
//! confidence bound holds); the rest form the upper set. The policy is
//! `pᵢ ∝ exp(γ Sᵢ)` where the coldness `γ` is chosen so that the upper set
//! keeps at least probability `δ`.

use rand::Rng;

use crate::error::{invalid, Result};

/// Upper-set maxima at or below this value are treated as zero when choosing γ.
pub const S_MAX_EPSILON: f64 = 1e-12;

/// Global ceiling on the coldness.
pub const GAMMA_CAP: f64 = 1e6;

/// Per-round index values and arm partition.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexSnapshot {
    pub s_values: Vec<f64>,
    pub phi: Vec<f64>,
    pub delta_hat: Vec<f64>,
    pub norms: Vec<f64>,
    pub mu_hat: Vec<f64>,
    pub leader: usize,
    pub upper_set: Vec<usize>,
    pub lower_set: Vec<usize>,
    pub s_max_upper: f64,
}

impl IndexSnapshot {
    pub fn num_arms(&self) -> usize {
        self.s_values.len()
    }

    pub fn is_upper(&self, i: usize) -> bool {
        self.s_values[i] >= 0.0
    }

    /// `S̃_max` is too small for the coldness formula to apply.
    pub fn is_degenerate(&self) -> bool {
        !self.lower_set.is_empty() && self.s_max_upper <= S_MAX_EPSILON
    }
}

/// Arm-selection distribution together with the coldness that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Policy {
    pub probs: Vec<f64>,
    pub gamma: f64,
}

impl Policy {
    /// Uniform distribution over `k` arms.
    pub fn uniform(k: usize) -> Self {
        Self {
            probs: vec![1.0 / k as f64; k],
            gamma: 0.0,
        }
    }

    /// All mass on `arm`.
    pub fn point_mass(k: usize, arm: usize) -> Self {
        let mut probs = vec![0.0; k];
        probs[arm] = 1.0;
        Self { probs, gamma: 0.0 }
    }

    /// Probability `epsilon` spread uniformly, the rest on `arm`.
    pub fn epsilon_mixture(k: usize, arm: usize, epsilon: f64) -> Self {
        let mut probs = vec![epsilon / k as f64; k];
        probs[arm] += 1.0 - epsilon;
        Self { probs, gamma: 0.0 }
    }

    pub fn num_arms(&self) -> usize {
        self.probs.len()
    }

    /// `Σᵢ pᵢ vᵢ`.
    pub fn expectation(&self, values: &[f64]) -> f64 {
        self.probs.iter().zip(values).map(|(p, v)| p * v).sum()
    }
}

/// Index of the arm with the largest lower confidence bound `μ̂ᵢ − β‖xᵢ‖`.
/// Ties go to the smallest index.
pub fn compute_leader(mu_hat: &[f64], norms: &[f64], beta: f64) -> Result<usize> {
    if mu_hat.is_empty() {
        return Err(invalid("empty arm set"));
    }
    if mu_hat.len() != norms.len() {
        return Err(invalid(format!(
            "mu_hat has {} entries but norms has {}",
            mu_hat.len(),
            norms.len()
        )));
    }
    let mut best = 0;
    let mut best_lcb = mu_hat[0] - beta * norms[0];
    for i in 1..mu_hat.len() {
        let lcb = mu_hat[i] - beta * norms[i];
        if lcb > best_lcb {
            best = i;
            best_lcb = lcb;
        }
    }
    Ok(best)
}

pub fn compute_indices(mu_hat: &[f64], norms: &[f64], beta: f64) -> Result<IndexSnapshot> {
    if beta.is_nan() || beta < 0.0 {
        return Err(invalid(format!("beta must be nonnegative, got {beta}")));
    }
    let leader = compute_leader(mu_hat, norms, beta)?;
    let k = mu_hat.len();
    let mut phi = Vec::with_capacity(k);
    let mut delta_hat = Vec::with_capacity(k);
    let mut s_values = Vec::with_capacity(k);
    let mut upper_set = Vec::new();
    let mut lower_set = Vec::new();
    let mut s_max_upper = f64::NEG_INFINITY;

    for i in 0..k {
        let p = norms[i] + norms[leader];
        let d = if i == leader {
            0.0
        } else {
            mu_hat[leader] - mu_hat[i]
        };
        let s = beta * p - d;
        if s >= 0.0 {
            upper_set.push(i);
            s_max_upper = s_max_upper.max(s);
        } else {
            lower_set.push(i);
        }
        phi.push(p);
        delta_hat.push(d);
        s_values.push(s);
    }

    Ok(IndexSnapshot {
        s_values,
        phi,
        delta_hat,
        norms: norms.to_vec(),
        mu_hat: mu_hat.to_vec(),
        leader,
        upper_set,
        lower_set,
        s_max_upper,
    })
}

/// Smallest nonnegative coldness giving the upper set probability at least
/// `delta`, capped at [`GAMMA_CAP`].
///
/// Returns 0 when the lower set is empty and [`GAMMA_CAP`] when `S̃_max` is
/// degenerate (see [`IndexSnapshot::is_degenerate`]).
pub fn compute_gamma(snapshot: &IndexSnapshot, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("delta must lie in (0, 1), got {delta}")));
    }
    if snapshot.lower_set.is_empty() {
        return Ok(0.0);
    }
    if snapshot.s_max_upper <= S_MAX_EPSILON {
        return Ok(GAMMA_CAP);
    }
    let lower = snapshot.lower_set.len() as f64;
    let gamma = (delta * lower / (1.0 - delta)).ln() / snapshot.s_max_upper;
    Ok(gamma.clamp(0.0, GAMMA_CAP))
}

/// `pᵢ = exp(γ Sᵢ) / Σⱼ exp(γ Sⱼ)`, evaluated with the maximum subtracted.
pub fn softmax_policy(snapshot: &IndexSnapshot, gamma: f64) -> Policy {
    Policy {
        probs: softmax(&snapshot.s_values, gamma),
        gamma,
    }
}

pub(crate) fn softmax(s_values: &[f64], gamma: f64) -> Vec<f64> {
    if gamma == 0.0 {
        return vec![1.0 / s_values.len() as f64; s_values.len()];
    }
    let top = s_values
        .iter()
        .fold(f64::NEG_INFINITY, |m, &s| m.max(gamma * s));
    let mut probs: Vec<f64> = s_values.iter().map(|&s| (gamma * s - top).exp()).collect();
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    probs
}

/// Draws an arm index from `policy`.
pub fn sample_arm<R: Rng + ?Sized>(policy: &Policy, rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut cumulative = 0.0;
    let mut last_positive = 0;
    for (i, &p) in policy.probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        cumulative += p;
        last_positive = i;
        if u < cumulative {
            return i;
        }
    }
    // u landed in the rounding gap above Σp.
    last_positive
}
