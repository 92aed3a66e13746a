use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A metric or ranking was asked for on an input it is not defined for
    /// (empty front, single-point spacing, ...).
    #[error("undefined for this input: {0}")]
    Undefined(String),

    #[error("scenario has {n} robots; brute-force enumeration is limited to {limit}")]
    EnumerationBudget { n: usize, limit: usize },

    #[error("illegal robot state transition {from:?} -> {to:?} for robot {robot}")]
    StateTransition {
        robot: usize,
        from: crate::model::RobotState,
        to: crate::model::RobotState,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }

    pub(crate) fn undefined(msg: impl Into<String>) -> Self {
        Error::Undefined(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
