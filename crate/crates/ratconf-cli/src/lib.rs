//! Config-driven experiment runner for confidence-set estimation.
//!
//! The binary front end parses a declarative TOML config describing one
//! scenario (possibly swept over a parameter grid), dispatches Monte Carlo
//! runs, closed forms, and bounds, and writes deterministic CSV or JSON
//! figure data.  All logic lives in this library crate so tests can drive
//! it without spawning processes.

pub mod config;
pub mod emit;
pub mod run;

use std::fmt;

/// Errors mapped to the process exit codes: config problems exit 2, numeric
/// domain problems exit 3, I/O problems exit 4.
#[derive(Debug)]
pub enum CliError {
    /// Unparseable or invalid configuration, including invalid flag
    /// combinations.
    Config(String),
    /// A numeric domain or computation error while running.
    Numeric(ratconf::Error),
    /// Output could not be written.
    Io(std::io::Error),
}

impl CliError {
    /// The process exit code for this error.
    #[must_use]
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Numeric(e) => write!(f, "numeric error: {e}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<ratconf::Error> for CliError {
    fn from(e: ratconf::Error) -> Self {
        CliError::Numeric(e)
    }
}

/// Shorthand result type for CLI operations.
pub type CliResult<T> = Result<T, CliError>;
