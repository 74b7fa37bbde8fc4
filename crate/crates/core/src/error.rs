use thiserror::Error;

use crate::econometrics::EconError;
use crate::expectations::SimError;
use crate::roughset::RoughSetError;
use crate::textmetrics::TextError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Top-level error, one variant per subsystem.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    RoughSet(#[from] RoughSetError),
    #[error(transparent)]
    Text(#[from] TextError),
    #[error(transparent)]
    Simulation(#[from] SimError),
    #[error(transparent)]
    Econometrics(#[from] EconError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("stage {stage}: {source}")]
    Stage { stage: String, source: Box<Error> },
    #[error("{0}")]
    Message(String),
}
