use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: no such file")]
    NoSuchFile { path: PathBuf },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Dataset { line: usize, message: String },

    #[error("category map line {line}: {message}")]
    CategoryMap { line: usize, message: String },

    #[error("unknown category label {label:?}{}", nearest.as_ref().map(|n| format!(" (nearest known label: {n:?})")).unwrap_or_default())]
    UnknownCategory {
        label: String,
        nearest: Option<String>,
    },

    #[error("example has no quadruples")]
    NoQuadruples,

    #[error("length mismatch: {left} predictions vs {right} gold examples")]
    LengthMismatch { left: usize, right: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("row {row} has no same-label partner in the batch")]
    NoPositive { row: usize },

    #[error("row {row} has zero norm; cosine similarity is undefined")]
    ZeroNorm { row: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        let path = path.into();
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::NoSuchFile { path }
        } else {
            Error::Io { path, source }
        }
    }
}
