//! Command errors and their exit codes.

use decayproj::Error;
use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or flag combinations.
    Usage(String),
    /// Error raised by the library.
    Core(Error),
    /// Some acceptance check failed.
    ValidationFailed,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ValidationFailed => 1,
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_input_error() => 2,
            CliError::Core(Error::InvalidArgument { .. } | Error::DimensionMismatch { .. }) => 2,
            CliError::Core(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::ValidationFailed => write!(f, "validation failed"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(Error::Io(e))
    }
}

pub fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

/// Require `cond`, else a usage error naming the flag.
pub fn check(cond: bool, flag: &str, msg: &str) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        usage(format!("{flag}: {msg}"))
    }
}
