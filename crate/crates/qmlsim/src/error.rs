//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated an operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A linear system had no unique solution (e.g. ridge weight zero on a
    /// singular Gram matrix).
    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    /// The request exceeds the dense-simulation size cap.
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    /// A factorization failed even after jitter escalation.
    #[error("ill-conditioned system: {0}")]
    IllConditioned(String),

    /// A data file or textual format could not be parsed. `offset` is the
    /// byte or line position where parsing stopped, when known.
    #[error("format error at offset {offset}: {msg}")]
    Format { msg: String, offset: usize },

    /// A numerical self-check failed (two algebraically equal routes
    /// disagreed beyond tolerance).
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>, offset: usize) -> Self {
        Error::Format {
            msg: msg.into(),
            offset,
        }
    }
}
