//! Arm feature sets and the regularized least-squares state shared by every
//! linear policy.
//!
//! [`RidgeState`] keeps the Gram matrix `V = αI + Σ x xᵀ`, its inverse, the
//! response accumulator `b = Σ x y` and the estimate `θ̂ = V⁻¹ b`. The inverse is
//! maintained with Sherman-Morrison rank-one updates and re-derived by a dense
//! Cholesky inversion every [`REFRESH_INTERVAL`] updates.

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Result};

/// Number of rank-one updates between dense re-inversions of the Gram matrix.
pub const REFRESH_INTERVAL: u64 = 512;

/// The `K` feature vectors (each of dimension `d`) defining one bandit instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmSet {
    features: Vec<DVector<f64>>,
    /// `K × d`, row `i` is arm `i`.
    matrix: DMatrix<f64>,
    dim: usize,
}

impl ArmSet {
    pub fn new(features: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_vectors(features.into_iter().map(DVector::from_vec).collect())
    }

    pub fn from_vectors(features: Vec<DVector<f64>>) -> Result<Self> {
        if features.len() < 2 {
            return Err(invalid(format!(
                "an arm set needs at least 2 arms, got {}",
                features.len()
            )));
        }
        let dim = features[0].len();
        if dim == 0 {
            return Err(invalid("feature dimension must be at least 1"));
        }
        for (i, x) in features.iter().enumerate() {
            if x.len() != dim {
                return Err(invalid(format!(
                    "arm {i} has dimension {}, expected {dim}",
                    x.len()
                )));
            }
            if x.iter().any(|v| !v.is_finite()) {
                return Err(invalid(format!("arm {i} has a non-finite feature")));
            }
        }
        let matrix = DMatrix::from_fn(features.len(), dim, |i, j| features[i][j]);
        Ok(Self {
            features,
            matrix,
            dim,
        })
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arm(&self, i: usize) -> &DVector<f64> {
        &self.features[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &DVector<f64>> {
        self.features.iter()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// Regularized least-squares state for one trajectory.
#[derive(Debug, Clone)]
pub struct RidgeState {
    gram: DMatrix<f64>,
    gram_inv: DMatrix<f64>,
    response: DVector<f64>,
    theta_hat: DVector<f64>,
    alpha: f64,
    rounds_observed: u64,
}

impl RidgeState {
    /// Fresh state with `V₀ = αI`, `b₀ = 0`, `θ̂₀ = 0`.
    pub fn new(dim: usize, alpha: f64) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be at least 1"));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(invalid(format!("alpha must be positive, got {alpha}")));
        }
        Ok(Self {
            gram: DMatrix::identity(dim, dim) * alpha,
            gram_inv: DMatrix::identity(dim, dim) / alpha,
            response: DVector::zeros(dim),
            theta_hat: DVector::zeros(dim),
            alpha,
            rounds_observed: 0,
        })
    }

    /// Incorporates the observation `(x, y)`.
    pub fn update(&mut self, x: &DVector<f64>, y: f64) -> Result<()> {
        let d = self.dim();
        if x.len() != d {
            return Err(invalid(format!(
                "feature has dimension {}, expected {d}",
                x.len()
            )));
        }
        if !y.is_finite() || x.iter().any(|v| !v.is_finite()) {
            return Err(invalid("non-finite observation"));
        }

        self.gram.ger(1.0, x, x, 1.0);
        self.response.axpy(y, x, 1.0);
        self.rounds_observed += 1;

        if self.rounds_observed.is_multiple_of(REFRESH_INTERVAL) {
            self.refresh_inverse();
        } else {
            let u = &self.gram_inv * x;
            let denom = 1.0 + x.dot(&u);
            self.gram_inv.ger(-1.0 / denom, &u, &u, 1.0);
        }
        self.theta_hat = &self.gram_inv * &self.response;
        Ok(())
    }

    /// Recomputes `V⁻¹` from `V` by a dense Cholesky inversion.
    pub fn refresh_inverse(&mut self) {
        // V stays SPD as αI plus outer products, so Cholesky cannot fail.
        let chol = self
            .gram
            .clone()
            .cholesky()
            .expect("Gram matrix is positive definite");
        let mut inv = chol.inverse();
        inv.fill_lower_triangle_with_upper_triangle();
        self.gram_inv = inv;
    }

    /// `‖x‖_{V⁻¹} = sqrt(xᵀ V⁻¹ x)`.
    pub fn weighted_norm(&self, x: &DVector<f64>) -> f64 {
        let q = x.dot(&(&self.gram_inv * x));
        q.max(0.0).sqrt()
    }

    /// `μ̂ = xᵀ θ̂`.
    pub fn estimate_mean(&self, x: &DVector<f64>) -> f64 {
        x.dot(&self.theta_hat)
    }

    /// `‖xᵢ‖_{V⁻¹}` for every arm.
    pub fn norms(&self, arms: &ArmSet) -> Vec<f64> {
        let x = arms.matrix();
        let projected = x * &self.gram_inv;
        projected
            .row_iter()
            .zip(x.row_iter())
            .map(|(p, r)| p.dot(&r).max(0.0).sqrt())
            .collect()
    }

    /// `μ̂ᵢ` for every arm.
    pub fn means(&self, arms: &ArmSet) -> Vec<f64> {
        (arms.matrix() * &self.theta_hat).iter().copied().collect()
    }

    /// `log det V`, the quantity bounding the elliptical potential.
    pub fn log_det_gram(&self) -> f64 {
        let chol = self
            .gram
            .clone()
            .cholesky()
            .expect("Gram matrix is positive definite");
        2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>()
    }

    pub fn dim(&self) -> usize {
        self.theta_hat.len()
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn gram_inv(&self) -> &DMatrix<f64> {
        &self.gram_inv
    }

    pub fn response(&self) -> &DVector<f64> {
        &self.response
    }

    pub fn theta_hat(&self) -> &DVector<f64> {
        &self.theta_hat
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rounds_observed(&self) -> u64 {
        self.rounds_observed
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(xs)
    }

    fn max_abs(m: &DMatrix<f64>) -> f64 {
        m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    #[test]
    fn init_is_scaled_identity() {
        let s = RidgeState::new(2, 1.0).unwrap();
        assert_eq!(s.gram(), &DMatrix::identity(2, 2));
        assert_eq!(s.theta_hat(), &DVector::zeros(2));
        assert_eq!(s.rounds_observed(), 0);

        let s = RidgeState::new(3, 2.0).unwrap();
        assert_eq!(s.gram_inv(), &(DMatrix::identity(3, 3) * 0.5));
    }

    #[test]
    fn init_rejects_bad_arguments() {
        assert!(RidgeState::new(1, 0.0).is_err());
        assert!(RidgeState::new(1, -1.0).is_err());
        assert!(RidgeState::new(0, 1.0).is_err());
        assert!(RidgeState::new(2, f64::NAN).is_err());
    }

    #[test]
    fn single_update_matches_hand_inversion() {
        let mut s = RidgeState::new(2, 1.0).unwrap();
        s.update(&v(&[1.0, 0.0]), 0.8).unwrap();
        // V = diag(2, 1), b = (0.8, 0)
        assert_abs_diff_eq!(s.theta_hat()[0], 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(s.theta_hat()[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.estimate_mean(&v(&[1.0, 0.0])), 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(
            s.weighted_norm(&v(&[1.0, 0.0])),
            0.5f64.sqrt(),
            epsilon = 1e-15
        );
        assert_eq!(s.rounds_observed(), 1);
    }

    #[test]
    fn zero_vector_update_is_a_no_op() {
        let mut s = RidgeState::new(2, 1.0).unwrap();
        s.update(&v(&[0.3, -0.4]), 1.0).unwrap();
        let before = s.clone();
        s.update(&v(&[0.0, 0.0]), 7.0).unwrap();
        assert_eq!(s.gram(), before.gram());
        assert_eq!(s.theta_hat(), before.theta_hat());
        assert_eq!(s.rounds_observed(), 2);
    }

    #[test]
    fn update_rejects_non_finite() {
        let mut s = RidgeState::new(2, 1.0).unwrap();
        assert!(s.update(&v(&[f64::NAN, 0.0]), 1.0).is_err());
        assert!(s.update(&v(&[1.0, 0.0]), f64::INFINITY).is_err());
        assert!(s.update(&v(&[1.0]), 0.0).is_err());
    }

    #[test]
    fn norms_and_means_on_fresh_state() {
        let s = RidgeState::new(2, 1.0).unwrap();
        assert_abs_diff_eq!(s.weighted_norm(&v(&[0.6, 0.8])), 1.0, epsilon = 1e-15);
        assert_eq!(s.weighted_norm(&v(&[0.0, 0.0])), 0.0);
        assert_eq!(s.estimate_mean(&v(&[0.3, 0.9])), 0.0);
    }

    #[test]
    fn estimate_is_linear() {
        let mut s = RidgeState::new(3, 1.0).unwrap();
        s.update(&v(&[0.2, 0.5, -0.1]), 0.7).unwrap();
        s.update(&v(&[-0.4, 0.1, 0.9]), -0.2).unwrap();
        let x = v(&[0.3, -0.2, 0.8]);
        assert_abs_diff_eq!(
            s.estimate_mean(&(&x * 2.0)),
            2.0 * s.estimate_mean(&x),
            epsilon = 1e-14
        );
    }

    #[test]
    fn refresh_agrees_with_rank_one_path() {
        let mut s = RidgeState::new(3, 1.5).unwrap();
        for k in 0..20 {
            let t = k as f64;
            s.update(&v(&[t.sin(), t.cos(), (0.3 * t).sin()]), t.cos())
                .unwrap();
        }
        let incremental = s.gram_inv().clone();
        s.refresh_inverse();
        assert!(max_abs(&(incremental - s.gram_inv())) < 1e-12);
    }

    #[test]
    fn batched_norms_match_single_queries() {
        let arms = ArmSet::new(vec![vec![0.6, 0.8], vec![1.0, 0.0], vec![-0.3, 0.2]]).unwrap();
        let mut s = RidgeState::new(2, 1.0).unwrap();
        s.update(&v(&[0.5, 0.5]), 0.3).unwrap();
        s.update(&v(&[0.9, -0.1]), 0.7).unwrap();
        for (i, (n, m)) in s.norms(&arms).iter().zip(s.means(&arms)).enumerate() {
            assert_abs_diff_eq!(*n, s.weighted_norm(arms.arm(i)), epsilon = 1e-14);
            assert_abs_diff_eq!(m, s.estimate_mean(arms.arm(i)), epsilon = 1e-14);
        }
    }

    #[test]
    fn arm_set_validation() {
        assert!(ArmSet::new(vec![vec![1.0]]).is_err());
        assert!(ArmSet::new(vec![vec![], vec![]]).is_err());
        assert!(ArmSet::new(vec![vec![1.0, 0.0], vec![1.0]]).is_err());
        assert!(ArmSet::new(vec![vec![1.0], vec![f64::NAN]]).is_err());
        let a = ArmSet::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!((a.len(), a.dim()), (2, 2));
    }
}
