//! Exit-code policy: 0 success, 2 usage/input errors, 1 internal errors.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, malformed input files, unsatisfiable sampler configs,
    /// unwritable outputs: everything the user can fix. Exit code 2.
    Input(String),
    /// Bugs and broken invariants. Exit code 1.
    Internal(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "error: {msg}"),
            CliError::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl From<repulse_core::Error> for CliError {
    fn from(e: repulse_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub fn input_err(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// Output-file failures count as input errors (bad --out path).
pub fn write_err(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

pub type CliResult<T> = Result<T, CliError>;
