use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the bandit toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error in {path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error("malformed rating matrix at row {row}, column {column}: {message}")]
    Schema {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("diagnostic threshold exceeded: {0}")]
    Diagnostics(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
    let path = path.into();
    move |source| Error::Io { path, source }
}
