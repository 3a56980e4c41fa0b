use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: field `{field}`: {message}")]
    Field {
        line: usize,
        field: String,
        message: String,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate record (dataset={dataset}, sample={sample}, system={system}) at line {line}")]
    DuplicateRecord {
        dataset: String,
        sample: String,
        system: String,
        line: usize,
    },

    #[error("conflicting metric `{metric}` for (dataset={dataset}, sample={sample}, system={system}): {first} vs {second}")]
    ConflictingMetric {
        dataset: String,
        sample: String,
        system: String,
        metric: String,
        first: f64,
        second: f64,
    },

    #[error("empty sample: {0}")]
    EmptySample(String),

    #[error("non-finite value in sample {0}")]
    NonFinite(String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("metric `{0}` has no scores in the selected records")]
    MissingMetric(String),

    #[error("config: {0}")]
    Config(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
