use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
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

    /// Malformed input file: missing column, bad header, wrong arity.
    #[error("format error: {0}")]
    Format(String),

    #[error("row {pair_id}: {message}")]
    Row { pair_id: String, message: String },

    /// A value outside its permitted domain (score range, non-finite float).
    #[error("validation error: {0}")]
    Validation(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// Duplicate keys or ids.
    #[error("integrity error: {0}")]
    Integrity(String),

    /// Parallel vectors that should line up do not.
    #[error("alignment error: expected {expected} values, got {actual}")]
    Alignment { expected: usize, actual: usize },

    #[error("coverage error: no embedding for {0}")]
    Coverage(String),

    #[error("vocabulary is empty after filtering")]
    EmptyVocabulary,

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("invalid hyperparameter: {0}")]
    Hyperparameter(String),

    #[error("need at least {needed} rows, got {got}")]
    TooFewRows { needed: usize, got: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
