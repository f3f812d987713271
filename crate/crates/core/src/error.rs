use thiserror::Error;

/// Library error type. The variants map onto the CLI exit codes:
/// structural/precondition errors exit 2, resource-cap errors exit 3,
/// internal invariant violations exit 4.
#[derive(Debug, Error)]
pub enum Error {
    /// Mismatched group specs, coefficient dimensions, malformed input.
    #[error("structural error: {0}")]
    Structural(String),

    /// A documented precondition of an operation was violated.
    #[error("precondition error: {0}")]
    Precondition(String),

    /// A computation would exceed the configured memory cap.
    #[error("resource error: {what} requires {required} elements, cap is {cap}")]
    Resource {
        what: String,
        required: usize,
        cap: usize,
    },

    /// An internal invariant failed; never silently ignored.
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
