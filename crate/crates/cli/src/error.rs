use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] vague_core::Error),
    #[error("{failed} of {total} specs failed")]
    SpecsFailed { failed: usize, total: usize },
    #[error("{0} replication checks failed")]
    ChecksFailed(usize),
}

impl CliError {
    /// 1 usage, 2 data error, 3 a replication check failed.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Read { .. } => 1,
            CliError::Write { .. } | CliError::Core(_) | CliError::SpecsFailed { .. } => 2,
            CliError::ChecksFailed(_) => 3,
        }
    }
}

pub fn core<E: Into<vague_core::Error>>(e: E) -> CliError {
    CliError::Core(e.into())
}
