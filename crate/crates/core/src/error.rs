use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside the domain of the operation.
    #[error("parameter out of domain: {0}")]
    Domain(String),

    /// A discrete spectrum failed validation (ordering, positivity, normalization).
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    /// The operation is not available for this kind of distribution.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An iterative method failed or produced a non-finite value.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A target (approximation ratio, bound) cannot be reached in the searched range.
    #[error("unattainable: {0}")]
    Unattainable(String),

    /// Malformed input text.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
