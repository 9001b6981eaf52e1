use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::RatingMatrix;
use crate::error::{invalid, Result};
use crate::rng::{stream, Purpose};

/// Output of [`factorize_impute`].
#[derive(Debug, Clone)]
pub struct AlsFit {
    /// Observed cells keep their original ratings; missing cells hold `U Vᵀ`.
    pub completed: RatingMatrix,
    pub user_factors: DMatrix<f64>,
    pub item_factors: DMatrix<f64>,
    /// Observed-entry RMSE after initialization and after every iteration.
    pub rmse_history: Vec<f64>,
    /// `Σ_observed (m − uᵀv)² + reg (‖U‖² + ‖V‖²)`, same indexing as `rmse_history`.
    pub objective_history: Vec<f64>,
}

/// Completes `matrix` by alternating ridge least squares on a rank-`rank`
/// factorization `M ≈ U Vᵀ`.
///
/// Factors start from a seeded uniform draw scaled to the mean absolute
/// observed rating; with `iterations == 0` the missing cells come straight
/// from that initialization.
pub fn factorize_impute(
    matrix: &RatingMatrix,
    rank: usize,
    regularization: f64,
    iterations: usize,
    seed: u64,
) -> Result<AlsFit> {
    if rank == 0 {
        return Err(invalid("rank must be at least 1"));
    }
    if !(regularization >= 0.0 && regularization.is_finite()) {
        return Err(invalid(format!(
            "regularization must be nonnegative, got {regularization}"
        )));
    }
    let (rows, cols) = (matrix.rows(), matrix.cols());
    let mask = matrix.mask();
    if let Some(i) = (0..rows).find(|&i| !mask.row(i).iter().any(|&m| m)) {
        return Err(invalid(format!("row {i} has no observed entries")));
    }
    if let Some(j) = (0..cols).find(|&j| !mask.column(j).iter().any(|&m| m)) {
        return Err(invalid(format!("column {j} has no observed entries")));
    }

    let values = matrix.values();
    let observed = matrix.observed_count() as f64;
    let mean_abs = values.iter().map(|v| v.abs()).sum::<f64>() / observed;
    let scale = (mean_abs.max(1e-3) / rank as f64).sqrt();
    let mut rng = stream(seed, Purpose::Factorization);
    let mut users = DMatrix::from_fn(rows, rank, |_, _| scale * rng.random_range(0.0..1.0));
    let mut items = DMatrix::from_fn(cols, rank, |_, _| scale * rng.random_range(0.0..1.0));

    let mut rmse_history = vec![rmse(matrix, &users, &items)];
    let mut objective_history = vec![objective(matrix, &users, &items, regularization)];
    for _ in 0..iterations {
        solve_side(values, mask, &items, &mut users, regularization, false);
        solve_side(values, mask, &users, &mut items, regularization, true);
        rmse_history.push(rmse(matrix, &users, &items));
        objective_history.push(objective(matrix, &users, &items, regularization));
    }

    let fitted = &users * items.transpose();
    let mut completed = values.clone();
    for ((c, f), &m) in completed.iter_mut().zip(fitted.iter()).zip(mask.iter()) {
        if !m {
            *c = *f;
        }
    }
    let completed = RatingMatrix::new(
        completed,
        DMatrix::from_element(rows, cols, true),
        matrix.header().to_vec(),
    )?;

    Ok(AlsFit {
        completed,
        user_factors: users,
        item_factors: items,
        rmse_history,
        objective_history,
    })
}

/// Ridge solve for every row of `target` given the fixed factors of the other
/// side. `transposed` selects item rows (matrix columns) instead of user rows.
fn solve_side(
    values: &DMatrix<f64>,
    mask: &DMatrix<bool>,
    fixed: &DMatrix<f64>,
    target: &mut DMatrix<f64>,
    reg: f64,
    transposed: bool,
) {
    let rank = fixed.ncols();
    for r in 0..target.nrows() {
        let mut a = DMatrix::<f64>::identity(rank, rank) * reg;
        let mut b = DVector::<f64>::zeros(rank);
        for k in 0..fixed.nrows() {
            let (i, j) = if transposed { (k, r) } else { (r, k) };
            if !mask[(i, j)] {
                continue;
            }
            let f = fixed.row(k).transpose();
            a.ger(1.0, &f, &f, 1.0);
            b.axpy(values[(i, j)], &f, 1.0);
        }
        let solution = match a.clone().cholesky() {
            Some(chol) => chol.solve(&b),
            None => a
                .svd(true, true)
                .solve(&b, 1e-12)
                .unwrap_or_else(|_| DVector::zeros(rank)),
        };
        target.set_row(r, &solution.transpose());
    }
}

fn residual_ss(matrix: &RatingMatrix, users: &DMatrix<f64>, items: &DMatrix<f64>) -> f64 {
    let mut ss = 0.0;
    for i in 0..matrix.rows() {
        for j in 0..matrix.cols() {
            if matrix.is_observed(i, j) {
                let e = matrix.values()[(i, j)] - users.row(i).dot(&items.row(j));
                ss += e * e;
            }
        }
    }
    ss
}

fn rmse(matrix: &RatingMatrix, users: &DMatrix<f64>, items: &DMatrix<f64>) -> f64 {
    (residual_ss(matrix, users, items) / matrix.observed_count() as f64).sqrt()
}

fn objective(matrix: &RatingMatrix, users: &DMatrix<f64>, items: &DMatrix<f64>, reg: f64) -> f64 {
    residual_ss(matrix, users, items) + reg * (users.norm_squared() + items.norm_squared())
}
