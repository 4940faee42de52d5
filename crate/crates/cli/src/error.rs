use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] moran_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 0 success, 2 bad arguments, 3 I/O failure, 4 internal invariant
    /// violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Model(moran_core::Error::InvalidParameter { .. }) => 2,
            CliError::Model(_) => 4,
            CliError::Io { .. } => 3,
            CliError::Internal(_) => 4,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
