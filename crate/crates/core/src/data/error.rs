use std::path::PathBuf;

use super::dataset::ValidationReport;

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("{0}")]
    Invalid(#[from] ValidationReport),

    #[error("sample {index} is empty (every sample needs at least one descriptor)")]
    EmptySample { index: usize },

    #[error("bad magic: expected {expected:?}, found {found:?}")]
    BadMagic { expected: [u8; 4], found: [u8; 4] },

    #[error("format version mismatch: file has version {found}, this build reads version {expected}")]
    Version { found: u16, expected: u16 },

    #[error("truncated payload while reading {what}")]
    Truncated { what: &'static str },

    #[error("{extra} trailing bytes after payload")]
    TrailingBytes { extra: usize },

    #[error("dimension overflow: {what}")]
    DimensionOverflow { what: String },

    #[error("malformed file: {0}")]
    Format(String),

    #[error("invalid hyperparameters: {0}")]
    Hyperparameters(String),

    #[error("model invariant violated: {0}")]
    Model(String),

    #[error("csv: {0}")]
    Csv(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl DataError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        DataError::Io {
            path: path.into(),
            source,
        }
    }
}
