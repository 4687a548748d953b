//! Crate-wide error type with CLI exit-code mapping.

/// Errors surfaced to callers. Contract violations (dimension mismatches,
/// stale caches) are panics, not variants: they indicate bugs, not inputs.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Bad configuration: unparseable files, invalid parameter ranges,
    /// scenario/command mismatches, checkpoint/config shape mismatches.
    #[error("configuration error: {0}")]
    Config(String),

    /// Malformed or truncated checkpoint data.
    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Fault raised while running a simulation or experiment.
    #[error("runtime fault: {0}")]
    Runtime(String),
}

impl Error {
    /// CLI exit code: 1 for configuration-class errors, 2 for runtime faults.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_) | Error::Checkpoint(_) => 1,
            Error::Io(_) | Error::Runtime(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
