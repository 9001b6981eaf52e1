use nalgebra::{DMatrix, DVector};

use super::RatingMatrix;
use crate::error::{invalid, Result};

/// Result of projecting column-centered data onto its top principal directions.
#[derive(Debug, Clone)]
pub struct PcaProjection {
    /// Column means removed before the decomposition.
    pub mean: DVector<f64>,
    /// `cols × d`, one principal direction per column.
    pub components: DMatrix<f64>,
    /// Every singular value of the centered data, descending.
    pub singular_values: Vec<f64>,
    /// `rows × d` projected data.
    pub reduced: DMatrix<f64>,
}

impl PcaProjection {
    pub fn dim(&self) -> usize {
        self.components.ncols()
    }

    /// Fraction of total variance captured by the kept components.
    pub fn captured_variance(&self) -> f64 {
        let total: f64 = self.singular_values.iter().map(|s| s * s).sum();
        if total == 0.0 {
            return 1.0;
        }
        let kept: f64 = self.singular_values[..self.dim()]
            .iter()
            .map(|s| s * s)
            .sum();
        kept / total
    }

    /// Maps reduced rows back to the original column space.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let mut out = &self.reduced * self.components.transpose();
        for mut row in out.row_iter_mut() {
            row += self.mean.transpose();
        }
        out
    }

    /// Reduced rows scaled to unit Euclidean length (zero rows stay zero).
    pub fn unit_rows(&self) -> Vec<DVector<f64>> {
        self.reduced
            .row_iter()
            .map(|r| {
                let v = r.transpose();
                let n = v.norm();
                if n > 0.0 {
                    v / n
                } else {
                    v
                }
            })
            .collect()
    }
}

/// PCA of a fully observed rating matrix.
pub fn pca_reduce(matrix: &RatingMatrix, d: usize) -> Result<PcaProjection> {
    if !matrix.is_complete() {
        return Err(invalid("PCA needs a fully observed matrix; impute first"));
    }
    pca_reduce_dense(matrix.values(), d)
}

/// Projects the column-centered rows of `data` onto the top `d` right
/// singular directions. Each direction is signed so that its largest-magnitude
/// coordinate is positive.
pub fn pca_reduce_dense(data: &DMatrix<f64>, d: usize) -> Result<PcaProjection> {
    let (rows, cols) = data.shape();
    if d == 0 || d > rows.min(cols) {
        return Err(invalid(format!(
            "target dimension {d} must lie in 1..={} for a {rows}x{cols} matrix",
            rows.min(cols)
        )));
    }
    let mean = data.row_mean().transpose();
    let mut centered = data.clone();
    for mut row in centered.row_iter_mut() {
        row -= mean.transpose();
    }

    let svd = centered.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .total_cmp(&svd.singular_values[a])
            .then(a.cmp(&b))
    });
    let singular_values = order.iter().map(|&i| svd.singular_values[i]).collect();

    let mut components = DMatrix::zeros(cols, d);
    for (k, &i) in order.iter().take(d).enumerate() {
        let mut dir = v_t.row(i).transpose();
        let pivot =
            dir.iter().enumerate().fold(
                0,
                |best, (j, v)| if v.abs() > dir[best].abs() { j } else { best },
            );
        if dir[pivot] < 0.0 {
            dir.neg_mut();
        }
        components.set_column(k, &dir);
    }
    let reduced = &centered * &components;

    Ok(PcaProjection {
        mean,
        components,
        singular_values,
        reduced,
    })
}
