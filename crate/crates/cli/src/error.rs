use std::io;
use std::path::PathBuf;

use depthkit::DepthError;
use thiserror::Error;

/// Errors of the command-line front end.
///
/// Rendered as one line `error: CODE: message` by the binary.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error("row {row}, column {column}: {reason}")]
    Parse {
        row: usize,
        column: usize,
        reason: String,
    },

    #[error("{0}: no data rows")]
    EmptyDataset(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Depth(#[from] DepthError),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "IO_ERROR",
            CliError::Parse { .. } => "PARSE_ERROR",
            CliError::EmptyDataset(_) => "EMPTY_DATASET",
            CliError::Usage(_) => "USAGE_ERROR",
            CliError::Depth(e) => e.code(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// The single machine-parsable line printed on failure.
    pub fn line(&self) -> String {
        let msg = self.to_string().replace('\n', " ");
        format!("error: {}: {}", self.code(), msg)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
