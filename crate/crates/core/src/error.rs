use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Bad input: wrong shape, out of range, violates a precondition.
    #[error("validation error: {0}")]
    Validation(String),
    /// Text that does not match a grammar.
    #[error("parse error at `{token}`: {reason}")]
    Parse { token: String, reason: String },
    /// An internal cross-check disagreed. Never expected on valid input.
    #[error("invariant breach: {0}")]
    InvariantBreach(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn parse(token: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn breach(msg: impl Into<String>) -> Self {
        Error::InvariantBreach(msg.into())
    }

    pub fn is_breach(&self) -> bool {
        matches!(self, Error::InvariantBreach(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
