//! Reward-generating environments.
//!
//! An [`Environment`] is an immutable arm set with known true means and a
//! noise model. Synthetic instances follow the linear model `μᵢ = xᵢᵀθ`;
//! dataset instances take their means from a held-out rating column.

mod als;
mod dataset;
mod pca;
mod ratings;

pub use als::{factorize_impute, AlsFit};
pub use dataset::{build_dataset_env, DatasetEnvironment};
pub use pca::{pca_reduce, PcaProjection};
pub use ratings::RatingMatrix;

use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::ArmSet;
use crate::policy::Policy;
use crate::rng::{stream, Purpose};

/// Observation noise around the true mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    Gaussian {
        sigma: f64,
    },
    /// Reward 1 with probability `clamp(μ, 0, 1)`, else 0.
    Bernoulli,
    None,
}

/// Noise family as written in configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseKind {
    #[default]
    Gaussian,
    Bernoulli,
    None,
}

impl NoiseKind {
    pub fn with_scale(self, scale: f64) -> NoiseModel {
        match self {
            NoiseKind::Gaussian => NoiseModel::Gaussian { sigma: scale },
            NoiseKind::Bernoulli => NoiseModel::Bernoulli,
            NoiseKind::None => NoiseModel::None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    arms: ArmSet,
    means: Vec<f64>,
    theta: Option<DVector<f64>>,
    noise: NoiseModel,
}

impl Environment {
    /// Linear environment with `μᵢ = xᵢᵀθ`.
    pub fn linear(arms: ArmSet, theta: DVector<f64>, noise: NoiseModel) -> Result<Self> {
        if theta.len() != arms.dim() {
            return Err(invalid(format!(
                "theta has dimension {}, arms have {}",
                theta.len(),
                arms.dim()
            )));
        }
        validate_noise(noise)?;
        let means = arms.iter().map(|x| x.dot(&theta)).collect();
        Ok(Self {
            arms,
            means,
            theta: Some(theta),
            noise,
        })
    }

    /// Environment with arbitrary per-arm means.
    pub fn with_means(arms: ArmSet, means: Vec<f64>, noise: NoiseModel) -> Result<Self> {
        if means.len() != arms.len() {
            return Err(invalid(format!(
                "{} means for {} arms",
                means.len(),
                arms.len()
            )));
        }
        if means.iter().any(|m| !m.is_finite()) {
            return Err(invalid("non-finite arm mean"));
        }
        validate_noise(noise)?;
        Ok(Self {
            arms,
            means,
            theta: None,
            noise,
        })
    }

    pub fn arms(&self) -> &ArmSet {
        &self.arms
    }

    pub fn num_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn dim(&self) -> usize {
        self.arms.dim()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn theta(&self) -> Option<&DVector<f64>> {
        self.theta.as_ref()
    }

    pub fn noise(&self) -> NoiseModel {
        self.noise
    }

    pub fn best_mean(&self) -> f64 {
        self.means.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `μ* − Σᵢ pᵢ μᵢ`.
    pub fn expected_regret(&self, policy: &Policy) -> f64 {
        self.best_mean() - policy.expectation(&self.means)
    }

    pub fn draw_reward<R: Rng + ?Sized>(&self, arm: usize, rng: &mut R) -> f64 {
        let mu = self.means[arm];
        match self.noise {
            NoiseModel::Gaussian { sigma } => {
                let z: f64 = StandardNormal.sample(rng);
                mu + sigma * z
            }
            NoiseModel::Bernoulli => {
                let p = mu.clamp(0.0, 1.0);
                if rng.random::<f64>() < p {
                    1.0
                } else {
                    0.0
                }
            }
            NoiseModel::None => mu,
        }
    }
}

fn validate_noise(noise: NoiseModel) -> Result<()> {
    if let NoiseModel::Gaussian { sigma } = noise {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(invalid(format!(
                "noise scale must be nonnegative, got {sigma}"
            )));
        }
    }
    Ok(())
}

/// Random unit vector, uniform on the sphere.
fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<f64> {
    loop {
        let v: DVector<f64> = DVector::from_fn(dim, |_, _| StandardNormal.sample(rng));
        let n = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

/// Synthetic linear instance: `k` arms with i.i.d. uniform[-1, 1] components
/// normalized to unit length, a random unit `θ`, and Gaussian noise of scale
/// `noise_scale`.
pub fn make_synthetic(k: usize, dim: usize, noise_scale: f64, seed: u64) -> Result<Environment> {
    make_synthetic_with(k, dim, NoiseModel::Gaussian { sigma: noise_scale }, seed)
}

pub fn make_synthetic_with(
    k: usize,
    dim: usize,
    noise: NoiseModel,
    seed: u64,
) -> Result<Environment> {
    if k < 2 {
        return Err(invalid(format!("need at least 2 arms, got {k}")));
    }
    if dim == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    let mut rng = stream(seed, Purpose::Environment);
    let features = (0..k)
        .map(|_| loop {
            let x = DVector::from_fn(dim, |_, _| rng.random_range(-1.0..=1.0));
            let n = x.norm();
            if n > 1e-12 {
                break x / n;
            }
        })
        .collect();
    let theta = random_unit_vector(dim, &mut rng);
    Environment::linear(ArmSet::from_vectors(features)?, theta, noise)
}
