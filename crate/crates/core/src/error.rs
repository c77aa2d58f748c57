use thiserror::Error;

/// Errors raised by kernel construction, inference and fitting.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GskError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl GskError {
    /// Numerical failures map to a different exit status than malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, GskError::Numerical(_))
    }
}

pub type Result<T> = std::result::Result<T, GskError>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(GskError::DimensionMismatch { expected, got })
    }
}
