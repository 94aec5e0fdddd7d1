use std::fmt;

use beltrami_core::Error as CoreError;

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config keys or parameter values. Exit 2.
    Usage(String),
    /// A file could not be read or written. Exit 2.
    Io(String, std::io::Error),
    /// A solver did not converge or ran out of scan window. Exit 3.
    Solver(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(..) => 2,
            CliError::Solver(_) => 3,
        }
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        CliError::Io(path.display().to_string(), e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(p, e) => write!(f, "{p}: {e}"),
            CliError::Solver(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::WindowExhausted { .. }
            | CoreError::Convergence { .. }
            | CoreError::Accuracy { .. }
            | CoreError::Bracket { .. } => CliError::Solver(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
