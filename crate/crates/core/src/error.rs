use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the simulator and its harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("invalid config field `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("state invariant violated: {0}")]
    InvariantViolation(String),

    #[error("schedule does not fit profile: {0}")]
    ScheduleMismatch(String),

    #[error("{0}")]
    EmptyInput(&'static str),

    #[error("failed to parse config: {0}")]
    ConfigParse(String),

    #[error("i/o error on {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidArgument {
        name,
        reason: reason.into(),
    }
}
