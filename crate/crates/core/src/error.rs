use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum DidmError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("missing required file {0}")]
    MissingFile(PathBuf),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("infeasible transport problem: {0}")]
    Infeasible(String),

    #[error("solver failed on node pair ({left}, {right}) at level {level}: {source}")]
    NodePair {
        left: usize,
        right: usize,
        level: usize,
        #[source]
        source: Box<DidmError>,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl DidmError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        DidmError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        DidmError::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = DidmError> = std::result::Result<T, E>;
