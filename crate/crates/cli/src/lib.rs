//! File formats, commands and the self-check suite behind the `cascade` binary.

pub mod checks;
pub mod commands;
pub mod format;

use std::fmt;

pub use format::{parse_document, Document, FormatError};

/// Failure of a command, mapped onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or invalid input (exit code 1).
    Input(String),
    /// A configured cap was hit (exit code 2).
    Resource(String),
    /// `check` found property violations (exit code 3).
    Violation(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Resource(_) => 2,
            CliError::Violation(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "input error: {msg}"),
            CliError::Resource(msg) => write!(f, "resource limit: {msg}"),
            CliError::Violation(n) => write!(f, "{n} property violation(s)"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<cascade_core::Error> for CliError {
    fn from(e: cascade_core::Error) -> Self {
        if e.is_resource() {
            CliError::Resource(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        if e.resource {
            CliError::Resource(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
