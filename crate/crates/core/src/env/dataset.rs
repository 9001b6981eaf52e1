use nalgebra::DMatrix;
use rand::seq::index::sample;

use super::{pca::pca_reduce_dense, Environment, NoiseModel, RatingMatrix};
use crate::error::{invalid, Result};
use crate::linalg::ArmSet;
use crate::rng::{stream, Purpose};

/// A dataset-derived environment together with the users it was built from.
#[derive(Debug, Clone)]
pub struct DatasetEnvironment {
    pub env: Environment,
    /// Row index (user) behind each arm, in arm order.
    pub users: Vec<usize>,
}

/// Builds an environment whose arms are `k` sampled users.
///
/// Features are the remaining columns, reduced to `d` by PCA fitted on all
/// users and then unit-normalized. Each arm's mean is the user's rating on
/// `held_out`, min-max rescaled to `[0, 1]` over the whole column (a constant
/// column maps to 0.5).
pub fn build_dataset_env(
    matrix: &RatingMatrix,
    held_out: usize,
    k: usize,
    d: usize,
    seed: u64,
    noise: NoiseModel,
) -> Result<DatasetEnvironment> {
    if !matrix.is_complete() {
        return Err(invalid(
            "dataset environments need a complete matrix; impute first",
        ));
    }
    let (rows, cols) = (matrix.rows(), matrix.cols());
    if held_out >= cols {
        return Err(invalid(format!(
            "held-out column {held_out} out of range for {cols} columns"
        )));
    }
    if cols < 2 {
        return Err(invalid(
            "need at least one feature column besides the held-out one",
        ));
    }
    if k < 2 || k > rows {
        return Err(invalid(format!("cannot sample {k} arms from {rows} users")));
    }

    let values = matrix.values();
    let features = DMatrix::from_fn(rows, cols - 1, |i, j| {
        values[(i, if j < held_out { j } else { j + 1 })]
    });
    let projection = pca_reduce_dense(&features, d)?;
    let unit = projection.unit_rows();

    let column = values.column(held_out);
    let (lo, hi) = (column.min(), column.max());
    let rescale = |r: f64| if hi > lo { (r - lo) / (hi - lo) } else { 0.5 };

    let mut rng = stream(seed, Purpose::Dataset);
    let users: Vec<usize> = sample(&mut rng, rows, k).into_vec();
    let arms = ArmSet::from_vectors(users.iter().map(|&u| unit[u].clone()).collect())?;
    let means = users
        .iter()
        .map(|&u| rescale(values[(u, held_out)]))
        .collect();

    Ok(DatasetEnvironment {
        env: Environment::with_means(arms, means, noise)?,
        users,
    })
}
