use std::fmt;

use gsk::GskError;

/// Failure of a command, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// malformed flags, files or configs (exit 2)
    Input(String),
    /// factorization or optimization breakdown (exit 3)
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Numerical(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<GskError> for CliError {
    fn from(e: GskError) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

/// Attaches the path to an I/O failure.
pub fn io_error(path: &std::path::Path, e: impl fmt::Display) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

pub type CliResult<T> = Result<T, CliError>;
