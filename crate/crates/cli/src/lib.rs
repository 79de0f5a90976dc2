//! File formats and command implementations behind the `fmsel` binary.
//!
//! Everything here is deterministic given a configuration and seed: the
//! only run-dependent output is a `# generated <unix-seconds>` header
//! line in the report files.

pub mod commands;
pub mod config;
pub mod csvio;
pub mod manifest;
pub mod model_io;
pub mod report;

use std::fmt;

/// CLI failure classes, mapped one-to-one onto process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameters (exit 1).
    Usage(String),
    /// Unreadable, malformed or inconsistent data (exit 2).
    Data(String),
    /// Numerical failure inside the solver or measures (exit 3).
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Data(msg) => write!(f, "data error: {msg}"),
            CliError::Numeric(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<fmsel_core::Error> for CliError {
    fn from(err: fmsel_core::Error) -> Self {
        use fmsel_core::Error::*;
        match err {
            SingularSystem { .. }
            | NonFiniteObjective { .. }
            | AllSweepPointsFailed
            | UndefinedMeasure { .. } => CliError::Numeric(err.to_string()),
            InvalidParam { .. } | FractionOutOfRange { .. } | ClassOutOfRange { .. } => {
                CliError::Usage(err.to_string())
            }
            _ => CliError::Data(err.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Data(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
