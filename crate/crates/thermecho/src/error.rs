use std::path::{Path, PathBuf};
use std::process::ExitCode;

use thiserror::Error;

use crate::oracle::OracleError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("oracle: {0}")]
    Oracle(#[from] OracleError),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 1 for bad input, 2 for a failed check, 3 for I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Verification(_) | CliError::Oracle(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

impl From<thermecho_core::Error> for CliError {
    fn from(e: thermecho_core::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<&CliError> for ExitCode {
    fn from(e: &CliError) -> Self {
        ExitCode::from(e.exit_code())
    }
}
