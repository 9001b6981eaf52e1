//! Rating-matrix ingestion and processed feature files.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::ExperimentSpec;
use super::output::write_csv_file;
use crate::env::{
    build_dataset_env, factorize_impute, DatasetEnvironment, Environment, NoiseModel, RatingMatrix,
};
use crate::error::{invalid, io_err, Error, Result};
use crate::linalg::ArmSet;

/// A rating matrix ready for environment construction.
#[derive(Debug, Clone)]
pub struct PreparedRatings {
    pub input: PathBuf,
    pub input_sha256: String,
    pub raw_rows: usize,
    pub raw_cols: usize,
    pub observed_cells: usize,
    /// Complete matrix: the input itself or its imputation.
    pub completed: RatingMatrix,
    pub imputation: Option<ImputationSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImputationSummary {
    pub rank: usize,
    pub regularization: f64,
    pub iterations: usize,
    pub seed: u64,
    pub final_rmse: f64,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    input: String,
    input_sha256: &'a str,
    rows: usize,
    cols: usize,
    observed_cells: usize,
    imputation: &'static str,
    als: Option<&'a ImputationSummary>,
    held_out: usize,
    arms: usize,
    dim: usize,
    seed: u64,
    noise: NoiseModelRecord,
    users: &'a [usize],
    files: Vec<&'static str>,
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum NoiseModelRecord {
    Gaussian { sigma: f64 },
    Bernoulli,
    None,
}

impl From<NoiseModel> for NoiseModelRecord {
    fn from(n: NoiseModel) -> Self {
        match n {
            NoiseModel::Gaussian { sigma } => Self::Gaussian { sigma },
            NoiseModel::Bernoulli => Self::Bernoulli,
            NoiseModel::None => Self::None,
        }
    }
}

/// Lower-case hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Reads the configured rating matrix and imputes it when cells are missing.
pub fn prepare_ratings(spec: &ExperimentSpec) -> Result<PreparedRatings> {
    let env = &spec.environment;
    let path = env
        .path
        .clone()
        .ok_or_else(|| invalid("environment.path is required for rating data"))?;
    let bytes = std::fs::read(&path).map_err(io_err(&path))?;
    let raw = RatingMatrix::from_csv_reader(bytes.as_slice())?;
    let (raw_rows, raw_cols, observed_cells) = (raw.rows(), raw.cols(), raw.observed_count());

    let (completed, imputation) = if raw.is_complete() {
        (raw, None)
    } else {
        let rank = env.rank.unwrap_or(env.dim);
        let seed = instance_seed(spec);
        let fit = factorize_impute(&raw, rank, env.regularization, env.iterations, seed)?;
        let summary = ImputationSummary {
            rank,
            regularization: env.regularization,
            iterations: env.iterations,
            seed,
            final_rmse: fit.rmse_history.last().copied().unwrap_or(f64::NAN),
        };
        (fit.completed, Some(summary))
    };

    Ok(PreparedRatings {
        input: path,
        input_sha256: sha256_hex(&bytes),
        raw_rows,
        raw_cols,
        observed_cells,
        completed,
        imputation,
    })
}

/// Environment seed for single-instance steps: `env_seed`, else the first run seed.
pub(crate) fn instance_seed(spec: &ExperimentSpec) -> u64 {
    spec.environment
        .env_seed
        .or_else(|| spec.seeds.first().copied())
        .unwrap_or(0)
}

pub(crate) fn held_out_column(spec: &ExperimentSpec, cols: usize) -> usize {
    spec.environment.held_out.unwrap_or(cols.saturating_sub(1))
}

/// Builds the arm environment for `seed` from prepared ratings.
pub fn ratings_environment(
    spec: &ExperimentSpec,
    prepared: &PreparedRatings,
    seed: u64,
) -> Result<DatasetEnvironment> {
    let env = &spec.environment;
    build_dataset_env(
        &prepared.completed,
        held_out_column(spec, prepared.completed.cols()),
        env.arms,
        env.dim,
        seed,
        env.noise.with_scale(env.noise_scale),
    )
}

/// Runs the ingest pipeline and writes `features.csv`, `means.csv`,
/// `completed.csv` and `manifest.json` into `out_dir`.
pub fn run_ingest(spec: &ExperimentSpec, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let prepared = prepare_ratings(spec)?;
    let seed = instance_seed(spec);
    let dataset = ratings_environment(spec, &prepared, seed)?;
    let env = &dataset.env;

    let features = out_dir.join("features.csv");
    write_features(&features, env.arms())?;
    let means = out_dir.join("means.csv");
    write_csv_file(
        &means,
        &["arm", "user", "mean"],
        env.means()
            .iter()
            .zip(&dataset.users)
            .enumerate()
            .map(|(i, (m, u))| vec![i.to_string(), u.to_string(), m.to_string()]),
    )?;
    let completed = out_dir.join("completed.csv");
    let file = std::fs::File::create(&completed).map_err(io_err(&completed))?;
    prepared
        .completed
        .write_csv(std::io::BufWriter::new(file))?;

    let manifest = Manifest {
        input: prepared.input.display().to_string(),
        input_sha256: &prepared.input_sha256,
        rows: prepared.raw_rows,
        cols: prepared.raw_cols,
        observed_cells: prepared.observed_cells,
        imputation: if prepared.imputation.is_some() {
            "als"
        } else {
            "none"
        },
        als: prepared.imputation.as_ref(),
        held_out: held_out_column(spec, prepared.raw_cols),
        arms: env.num_arms(),
        dim: env.dim(),
        seed,
        noise: env.noise().into(),
        users: &dataset.users,
        files: vec!["features.csv", "means.csv", "completed.csv"],
    };
    let manifest_path = out_dir.join("manifest.json");
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    std::fs::write(&manifest_path, text).map_err(io_err(&manifest_path))?;

    Ok(vec![features, means, completed, manifest_path])
}

/// Writes one row per arm: `arm, x0, …, x{d-1}`.
pub fn write_features(path: &Path, arms: &ArmSet) -> Result<()> {
    let mut header = vec!["arm".to_string()];
    header.extend((0..arms.dim()).map(|j| format!("x{j}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv_file(
        path,
        &header,
        arms.iter().enumerate().map(|(i, x)| {
            std::iter::once(i.to_string())
                .chain(x.iter().map(|v| v.to_string()))
                .collect()
        }),
    )
}

/// Loads an environment from `features.csv` and `means.csv` as written by
/// [`run_ingest`]. Rows are matched by their `arm` column.
pub fn read_features(
    features_path: &Path,
    means_path: &Path,
    noise: NoiseModel,
) -> Result<Environment> {
    let features = read_table(features_path)?;
    let means = read_table(means_path)?;
    if features.header.first().map(String::as_str) != Some("arm") {
        return Err(schema(
            0,
            0,
            "first column of the features file must be `arm`",
        ));
    }
    let mean_col = means
        .header
        .iter()
        .position(|h| h == "mean")
        .ok_or_else(|| schema(0, 0, "means file has no `mean` column"))?;
    if features.rows.len() != means.rows.len() {
        return Err(invalid(format!(
            "{} feature rows but {} mean rows",
            features.rows.len(),
            means.rows.len()
        )));
    }
    for (r, row) in features.rows.iter().chain(&means.rows).enumerate() {
        if row[0] != (r % features.rows.len()) as f64 {
            return Err(schema(
                r % features.rows.len(),
                0,
                "arm indices must be 0, 1, 2, … in order",
            ));
        }
    }
    let vectors = features.rows.iter().map(|row| row[1..].to_vec()).collect();
    let mu = means.rows.iter().map(|row| row[mean_col]).collect();
    Environment::with_means(ArmSet::new(vectors)?, mu, noise)
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

fn read_table(path: &Path) -> Result<Table> {
    let file = std::fs::File::open(path).map_err(io_err(path))?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let header = reader
        .headers()?
        .iter()
        .map(str::to_string)
        .collect::<Vec<_>>();
    let mut rows = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .enumerate()
            .map(|(c, field)| {
                field
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| schema(r, c, &format!("`{field}` is not a finite number")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(Table { header, rows })
}

fn schema(row: usize, column: usize, message: &str) -> Error {
    Error::Schema {
        row,
        column,
        message: message.to_string(),
    }
}
