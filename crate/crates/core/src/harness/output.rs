//! Tabular outputs: CSV writing, per-round summaries and the width table.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{io_err, Result};

/// Writes a CSV file with `header` and one record per row. Floats should be
/// formatted with `Display`, which round-trips exactly.
pub fn write_csv_file<I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let file = std::fs::File::create(path).map_err(io_err(path))?;
    let mut w = csv::Writer::from_writer(std::io::BufWriter::new(file));
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}

/// Sample mean and standard error of the mean. A single value has zero error.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Round-by-round mean and standard error across equally long curves.
pub fn summarize_curves(curves: &[&[f64]]) -> Vec<(f64, f64)> {
    let len = curves.iter().map(|c| c.len()).min().unwrap_or(0);
    let mut column = Vec::with_capacity(curves.len());
    (0..len)
        .map(|t| {
            column.clear();
            column.extend(curves.iter().map(|c| c[t]));
            mean_stderr(&column)
        })
        .collect()
}

/// One column of the learned-versus-theoretical width table.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaTableRow {
    pub dim: usize,
    pub horizon: usize,
    pub seeds: usize,
    pub beta_hat: f64,
    pub beta_hat_stderr: f64,
    pub beta_theory: f64,
    /// Seeds whose training trace met the convergence window.
    pub converged_seeds: usize,
}

impl BetaTableRow {
    pub fn ratio(&self) -> f64 {
        self.beta_hat / self.beta_theory
    }
}

pub const BETA_TABLE_HEADER: [&str; 8] = [
    "dim",
    "horizon",
    "seeds",
    "beta_hat",
    "beta_hat_stderr",
    "beta_theory",
    "ratio",
    "converged_seeds",
];

pub fn beta_table_records(rows: &[BetaTableRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                r.dim.to_string(),
                r.horizon.to_string(),
                r.seeds.to_string(),
                r.beta_hat.to_string(),
                r.beta_hat_stderr.to_string(),
                r.beta_theory.to_string(),
                r.ratio().to_string(),
                r.converged_seeds.to_string(),
            ]
        })
        .collect()
}

/// Markdown table with one column per `(d, T)` configuration.
pub fn beta_table_markdown(rows: &[BetaTableRow]) -> String {
    let mut s = String::from("|");
    for r in rows {
        let _ = write!(s, " | d={}, T={}", r.dim, r.horizon);
    }
    s.push_str(" |\n|---");
    for _ in rows {
        s.push_str("|---");
    }
    s.push_str("|\n| learned β");
    for r in rows {
        let _ = write!(s, " | {:.3} ± {:.3}", r.beta_hat, r.beta_hat_stderr);
    }
    s.push_str(" |\n| theoretical β");
    for r in rows {
        let _ = write!(s, " | {:.3}", r.beta_theory);
    }
    s.push_str(" |\n| ratio");
    for r in rows {
        let _ = write!(s, " | {:.3}", r.ratio());
    }
    s.push_str(" |\n| converged");
    for r in rows {
        let _ = write!(s, " | {}/{}", r.converged_seeds, r.seeds);
    }
    s.push_str(" |\n");
    s
}
