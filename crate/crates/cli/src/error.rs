use std::path::PathBuf;

use panel_station::{ConfigErrors, StationError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: invalid config\n{errors}")]
    Config { path: PathBuf, errors: ConfigErrors },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Station(#[from] StationError),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    /// 2 for usage and configuration faults, 1 for faults at runtime.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Read { .. } | CliError::Config { .. } | CliError::Usage(_) => 2,
            CliError::Station(StationError::Config(_)) => 2,
            CliError::Station(_) | CliError::Runtime(_) => 1,
        }
    }
}
