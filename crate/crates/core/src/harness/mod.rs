//! Configuration-driven experiments: config files, orchestration, outputs and
//! dataset ingestion.

pub mod config;
pub mod experiment;
pub mod ingest;
pub mod output;
pub mod svg;

pub use config::{
    load_config, parse_config, Algorithm, BaselineSection, DiagnosticsSection, EnvKind,
    EnvironmentSpec, ExperimentSpec, Mode, RunSection, TrainingSection,
};
pub use experiment::{
    run_experiment, AlgorithmRun, ExperimentOptions, ExperimentOutcome, SeedOutcome,
    TrainingRecord, INCOMPLETE_MARKER,
};
pub use ingest::{prepare_ratings, read_features, run_ingest, sha256_hex, PreparedRatings};
pub use output::{beta_table_markdown, mean_stderr, summarize_curves, BetaTableRow};
