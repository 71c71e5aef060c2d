use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WireError {
    #[error("a data line needs at least one item")]
    NoItems,
    #[error("odd field count {0}: expected a timestamp and id/value pairs")]
    OddFields(usize),
    #[error("bad timestamp '{0}'")]
    BadTimestamp(String),
    #[error("bad escape sequence in '{0}'")]
    BadEscape(String),
}

/// Request errors of the agent, rendered as MTConnect error documents.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AgentError {
    #[error("sequence {requested} is outside the buffer [{first}, {next})")]
    OutOfRange { requested: u64, first: u64, next: u64 },
    #[error("{0}")]
    InvalidRequest(String),
}

impl AgentError {
    pub fn code(&self) -> &'static str {
        match self {
            AgentError::OutOfRange { .. } => "OUT_OF_RANGE",
            AgentError::InvalidRequest(_) => "INVALID_REQUEST",
        }
    }
}
