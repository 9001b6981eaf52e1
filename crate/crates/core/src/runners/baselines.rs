use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{theoretical_beta, RunConfig, RunResult};
use crate::env::Environment;
use crate::error::Result;
use crate::linalg::RidgeState;
use crate::policy::Policy;

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..values.len() {
        if values[i] > values[best] {
            best = i;
        }
    }
    best
}

fn linucb_width(env: &Environment, config: &RunConfig) -> Result<f64> {
    match config.linucb_beta {
        Some(b) => Ok(b),
        None => theoretical_beta(
            config.bound.noise_scale,
            config.bound.delta,
            env.dim(),
            config.horizon,
            config.alpha,
            config.bound.theta_bound,
        ),
    }
}

/// Posterior inflation `v = R sqrt(9 d ln(T/δ))` unless overridden.
pub fn lints_scale(env: &Environment, config: &RunConfig) -> f64 {
    config.lints_scale.unwrap_or_else(|| {
        let b = &config.bound;
        let log_term = (config.horizon as f64 / b.delta).ln().max(0.0);
        b.noise_scale * (9.0 * env.dim() as f64 * log_term).sqrt()
    })
}

/// LinUCB: pull `argmax μ̂ᵢ + β ‖xᵢ‖`, ties to the smallest index.
pub fn run_linucb<R: Rng + ?Sized>(
    env: &Environment,
    config: &RunConfig,
    rng: &mut R,
) -> Result<RunResult> {
    config.validate()?;
    let beta = linucb_width(env, config)?;
    run_greedy_family(env, config, rng, |state, _| {
        let arms = env.arms();
        let ucb: Vec<f64> = state
            .means(arms)
            .iter()
            .zip(state.norms(arms))
            .map(|(m, n)| m + beta * n)
            .collect();
        Policy::point_mass(arms.len(), argmax(&ucb))
    })
}

/// Draws `θ̃ ~ N(θ̂, v² V⁻¹)`.
pub fn sample_posterior<R: Rng + ?Sized>(
    state: &RidgeState,
    scale: f64,
    rng: &mut R,
) -> DVector<f64> {
    let d = state.dim();
    let z: DVector<f64> = DVector::from_fn(d, |_, _| StandardNormal.sample(rng));
    // V⁻¹ = (L Lᵀ)⁻¹, so w = L⁻ᵀ z has covariance V⁻¹.
    let chol = state
        .gram()
        .clone()
        .cholesky()
        .expect("Gram matrix is positive definite");
    let w = chol
        .l()
        .transpose()
        .solve_upper_triangular(&z)
        .expect("Cholesky factor has a positive diagonal");
    state.theta_hat() + w * scale
}

/// Linear Thompson sampling with posterior inflation [`lints_scale`].
pub fn run_lints<R: Rng + ?Sized>(
    env: &Environment,
    config: &RunConfig,
    rng: &mut R,
) -> Result<RunResult> {
    config.validate()?;
    let scale = lints_scale(env, config);
    run_greedy_family(env, config, rng, |state, rng| {
        let theta = sample_posterior(state, scale, rng);
        let scores: Vec<f64> = (env.arms().matrix() * theta).iter().copied().collect();
        Policy::point_mass(env.num_arms(), argmax(&scores))
    })
}

/// ε-greedy on `μ̂`; the recorded policy is the ε-mixture.
pub fn run_epsilon_greedy<R: Rng + ?Sized>(
    env: &Environment,
    config: &RunConfig,
    rng: &mut R,
) -> Result<RunResult> {
    config.validate()?;
    let epsilon = config.epsilon;
    run_greedy_family(env, config, rng, |state, _| {
        let greedy = argmax(&state.means(env.arms()));
        Policy::epsilon_mixture(env.num_arms(), greedy, epsilon)
    })
}

/// Shared loop: `choose` returns the round's policy, the arm is sampled from
/// it, and the ridge state is updated with the observation.
fn run_greedy_family<R, F>(
    env: &Environment,
    config: &RunConfig,
    rng: &mut R,
    mut choose: F,
) -> Result<RunResult>
where
    R: Rng + ?Sized,
    F: FnMut(&RidgeState, &mut R) -> Policy,
{
    let arms = env.arms();
    let mut state = RidgeState::new(arms.dim(), config.alpha)?;
    let mut result = RunResult::with_capacity(config.horizon);
    for _ in 0..config.horizon {
        let policy = choose(&state, rng);
        let arm = crate::policy::sample_arm(&policy, rng);
        let reward = env.draw_reward(arm, rng);
        result.push_round(env.expected_regret(&policy), reward);
        state.update(arms.arm(arm), reward)?;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{make_synthetic, make_synthetic_with, NoiseModel};
    use crate::linalg::ArmSet;
    use crate::rng::{stream, Purpose};

    fn cfg() -> RunConfig {
        RunConfig {
            horizon: 200,
            ..Default::default()
        }
    }

    fn three_arms() -> Environment {
        let arms = ArmSet::new(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.6, 0.8]]).unwrap();
        Environment::with_means(arms, vec![0.2, 0.9, 0.5], NoiseModel::None).unwrap()
    }

    #[test]
    fn linucb_zero_width_is_greedy_and_fresh_ties_go_first() {
        let env = three_arms();
        let config = RunConfig {
            horizon: 1,
            linucb_beta: Some(0.0),
            ..cfg()
        };
        // fresh state: every μ̂ is zero, so arm 0 is pulled
        let r = run_linucb(&env, &config, &mut stream(0, Purpose::Run)).unwrap();
        assert!((r.final_regret() - 0.7).abs() < 1e-12);

        let config = RunConfig {
            linucb_beta: Some(0.0),
            ..cfg()
        };
        let r = run_linucb(&env, &config, &mut stream(0, Purpose::Run)).unwrap();
        assert!(r.expected_regret_curve.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn epsilon_extremes() {
        let env = make_synthetic(5, 3, 0.5, 1).unwrap();
        let uniform = RunConfig {
            epsilon: 1.0,
            ..cfg()
        };
        let r = run_epsilon_greedy(&env, &uniform, &mut stream(0, Purpose::Run)).unwrap();
        let per_round = env.best_mean() - env.means().iter().sum::<f64>() / 5.0;
        assert!((r.final_regret() - 200.0 * per_round).abs() < 1e-9);

        let greedy = RunConfig {
            epsilon: 0.0,
            linucb_beta: Some(0.0),
            ..cfg()
        };
        let a = run_epsilon_greedy(&env, &greedy, &mut stream(4, Purpose::Run)).unwrap();
        let b = run_linucb(&env, &greedy, &mut stream(4, Purpose::Run)).unwrap();
        assert_eq!(a.expected_regret_curve, b.expected_regret_curve);
    }

    #[test]
    fn lints_without_inflation_is_greedy() {
        // noiseless rewards, so the extra normals LinTS draws cannot matter
        let env = make_synthetic_with(6, 3, NoiseModel::None, 2).unwrap();
        let config = RunConfig {
            lints_scale: Some(0.0),
            epsilon: 0.0,
            ..cfg()
        };
        let a = run_lints(&env, &config, &mut stream(5, Purpose::Run)).unwrap();
        let b = run_epsilon_greedy(&env, &config, &mut stream(6, Purpose::Run)).unwrap();
        assert_eq!(a.expected_regret_curve, b.expected_regret_curve);
        let c = run_lints(&env, &config, &mut stream(5, Purpose::Run)).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn default_lints_scale() {
        let env = make_synthetic(4, 10, 0.5, 2).unwrap();
        let v = lints_scale(&env, &RunConfig::default());
        let expect = 0.5 * (90.0 * (1024.0f64 / 0.1).ln()).sqrt();
        assert!((v - expect).abs() < 1e-12);
    }
}
