use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the domain of the operation (arity
    /// mismatch, out-of-range integer, malformed bit vector, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("stream too short: {len} bits with n = {n}, need at least {} bits", n + 1)]
    StreamTooShort { len: usize, n: usize },

    #[error("refusing to enumerate: {0}")]
    EnumerationCap(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
