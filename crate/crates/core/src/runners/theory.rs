use crate::error::{invalid, Result};

/// Self-normalized confidence width
/// `R sqrt(2 ln(1/δ) + d ln(1 + T/d)) + sqrt(α) C`.
pub fn theoretical_beta(
    noise_scale: f64,
    delta: f64,
    dim: usize,
    horizon: usize,
    alpha: f64,
    theta_bound: f64,
) -> Result<f64> {
    if !(noise_scale >= 0.0 && noise_scale.is_finite()) {
        return Err(invalid(format!("R must be nonnegative, got {noise_scale}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("delta must lie in (0, 1), got {delta}")));
    }
    if dim == 0 || horizon == 0 {
        return Err(invalid("dimension and horizon must be positive"));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(invalid(format!("alpha must be positive, got {alpha}")));
    }
    if !(theta_bound >= 0.0 && theta_bound.is_finite()) {
        return Err(invalid(format!("C must be nonnegative, got {theta_bound}")));
    }
    let d = dim as f64;
    let t = horizon as f64;
    let radius = (2.0 * (1.0 / delta).ln() + d * (1.0 + t / d).ln()).sqrt();
    Ok(noise_scale * radius + alpha.sqrt() * theta_bound)
}

/// Cumulative-regret bound `4√2 β δ sqrt(T d ln(α + T/d))` for a run at width `beta`.
pub fn regret_bound(beta: f64, delta: f64, dim: usize, horizon: usize, alpha: f64) -> f64 {
    let d = dim as f64;
    let t = horizon as f64;
    4.0 * std::f64::consts::SQRT_2 * beta * delta * (t * d * (alpha + t / d).ln()).sqrt()
}

/// `2 d ln(α + T/d)`, the bound on `Σₜ ‖xₜ‖²_{V⁻¹ₜ₋₁}` over unit-norm selections.
pub fn elliptical_potential_bound(dim: usize, horizon: usize, alpha: f64) -> f64 {
    let d = dim as f64;
    2.0 * d * (alpha + horizon as f64 / d).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn theoretical_beta_values() {
        assert_abs_diff_eq!(theoretical_beta(0.0, 0.1, 5, 256, 1.0, 1.0).unwrap(), 1.0);
        let b = theoretical_beta(0.5, 0.1, 5, 256, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(b, 3.469, epsilon = 5e-4);
        let by_t: Vec<f64> = [64, 256, 1024]
            .iter()
            .map(|&t| theoretical_beta(0.5, 0.1, 5, t, 1.0, 1.0).unwrap())
            .collect();
        assert!(by_t.windows(2).all(|w| w[1] >= w[0]));
        let by_d: Vec<f64> = [1, 5, 10, 20]
            .iter()
            .map(|&d| theoretical_beta(0.5, 0.1, d, 1024, 1.0, 1.0).unwrap())
            .collect();
        assert!(by_d.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn theoretical_beta_domain() {
        assert!(theoretical_beta(-1.0, 0.1, 5, 10, 1.0, 1.0).is_err());
        assert!(theoretical_beta(0.5, 1.0, 5, 10, 1.0, 1.0).is_err());
        assert!(theoretical_beta(0.5, 0.1, 0, 10, 1.0, 1.0).is_err());
        assert!(theoretical_beta(0.5, 0.1, 5, 0, 1.0, 1.0).is_err());
        assert!(theoretical_beta(0.5, 0.1, 5, 10, 0.0, 1.0).is_err());
    }

    #[test]
    fn regret_bound_values() {
        assert_eq!(regret_bound(0.0, 0.99, 10, 1024, 1.0), 0.0);
        assert_abs_diff_eq!(
            regret_bound(1.0, 0.99, 10, 1024, 1.0),
            1220.6,
            epsilon = 0.1
        );
        assert_abs_diff_eq!(
            regret_bound(2.5, 0.99, 10, 1024, 1.0),
            2.5 * regret_bound(1.0, 0.99, 10, 1024, 1.0),
            epsilon = 1e-9
        );
    }
}
