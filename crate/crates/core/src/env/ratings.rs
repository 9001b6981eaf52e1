use std::io::{Read, Write};
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{invalid, io_err, Error, Result};

/// A users × items rating matrix with an observed-entry mask.
///
/// Unobserved entries hold 0.0 in `values` and are ignored by every statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingMatrix {
    values: DMatrix<f64>,
    mask: DMatrix<bool>,
    header: Vec<String>,
}

impl RatingMatrix {
    pub fn new(values: DMatrix<f64>, mask: DMatrix<bool>, header: Vec<String>) -> Result<Self> {
        if values.shape() != mask.shape() {
            return Err(invalid(format!(
                "values are {:?} but mask is {:?}",
                values.shape(),
                mask.shape()
            )));
        }
        if header.len() != values.ncols() {
            return Err(invalid(format!(
                "{} header names for {} columns",
                header.len(),
                values.ncols()
            )));
        }
        let mut values = values;
        for (v, &m) in values.iter_mut().zip(mask.iter()) {
            if !m {
                *v = 0.0;
            } else if !v.is_finite() {
                return Err(invalid("observed rating is not finite"));
            }
        }
        Ok(Self {
            values,
            mask,
            header,
        })
    }

    /// Every entry observed; columns named `item_0`, `item_1`, ….
    pub fn fully_observed(values: DMatrix<f64>) -> Result<Self> {
        let (r, c) = values.shape();
        let header = (0..c).map(|j| format!("item_{j}")).collect();
        Self::new(values, DMatrix::from_element(r, c, true), header)
    }

    /// Parses a CSV with a header row, one row per user and empty fields for
    /// missing ratings. Schema errors carry the 0-based data row and column.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
        let cols = header.len();
        if cols == 0 {
            return Err(Error::Schema {
                row: 0,
                column: 0,
                message: "header row is empty".into(),
            });
        }

        let mut data = Vec::new();
        let mut observed = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record?;
            if record.len() != cols {
                return Err(Error::Schema {
                    row,
                    column: record.len().min(cols),
                    message: format!("expected {cols} fields, found {}", record.len()),
                });
            }
            for (column, field) in record.iter().enumerate() {
                if field.is_empty() {
                    data.push(0.0);
                    observed.push(false);
                    continue;
                }
                let v: f64 = field.parse().map_err(|_| Error::Schema {
                    row,
                    column,
                    message: format!("`{field}` is not a number"),
                })?;
                if !v.is_finite() {
                    return Err(Error::Schema {
                        row,
                        column,
                        message: format!("`{field}` is not finite"),
                    });
                }
                data.push(v);
                observed.push(true);
            }
        }
        let rows = data.len() / cols;
        if rows == 0 {
            return Err(Error::Schema {
                row: 0,
                column: 0,
                message: "no data rows".into(),
            });
        }
        Self::new(
            DMatrix::from_row_slice(rows, cols, &data),
            DMatrix::from_row_slice(rows, cols, &observed),
            header,
        )
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(io_err(path))?;
        Self::from_csv_reader(file)
    }

    /// Writes the matrix as CSV in column order; unobserved cells are empty.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(&self.header)?;
        for i in 0..self.rows() {
            let row: Vec<String> = (0..self.cols())
                .map(|j| {
                    if self.mask[(i, j)] {
                        self.values[(i, j)].to_string()
                    } else {
                        String::new()
                    }
                })
                .collect();
            w.write_record(&row)?;
        }
        w.flush().map_err(io_err("<csv output>"))?;
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.values.nrows()
    }

    pub fn cols(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn mask(&self) -> &DMatrix<bool> {
        &self.mask
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn is_observed(&self, row: usize, col: usize) -> bool {
        self.mask[(row, col)]
    }

    pub fn observed_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn is_complete(&self) -> bool {
        self.mask.iter().all(|&m| m)
    }
}
