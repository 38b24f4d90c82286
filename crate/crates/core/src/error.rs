use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid argument to an operation.
    #[error("invalid input: {0}")]
    Input(String),

    /// Invalid experiment configuration.
    #[error("config error: {0}")]
    Config(String),

    /// Numerical failure (singular matrix, non-finite value, ...).
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Estimation could not be carried out with the data at hand.
    #[error("estimation error: {0}")]
    Estimation(String),

    /// A library invariant was violated.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Failure inside one replication of a batch run.
    #[error("replication {replication}: {source}")]
    Replication {
        replication: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the batch CLI: 2 config/input, 3 numeric, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Config(_) => 2,
            Error::Numeric(_) | Error::Estimation(_) | Error::Internal(_) => 3,
            Error::Io { .. } => 4,
            Error::Replication { source, .. } => source.exit_code(),
        }
    }
}
