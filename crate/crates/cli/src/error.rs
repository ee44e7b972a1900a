use std::path::PathBuf;

use thiserror::Error;

/// Failures of a run, each mapped to a process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    /// Rejected configuration (exit 1).
    #[error("{0}")]
    Config(String),
    /// A core routine failed while producing data (exit 2).
    #[error("numerical failure: {0}")]
    Numerical(#[from] qzc_core::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{failed} of {total} validation checks failed")]
    ChecksFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            _ => 2,
        }
    }

    pub(crate) fn config(field: &str, reason: impl std::fmt::Display) -> Self {
        CliError::Config(format!("invalid --{field}: {reason}"))
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

/// Core validation errors raised while building a config are the user's
/// fault, everything else is numerical.
pub(crate) fn from_setup(err: qzc_core::Error) -> CliError {
    match err {
        qzc_core::Error::Validation { .. } => CliError::Config(err.to_string()),
        other => CliError::Numerical(other),
    }
}
