use thiserror::Error;

/// Errors raised by the algebra and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands live over different ambient `n`, or an assignment misses a variable.
    #[error("structural error: {0}")]
    Structural(String),
    /// An argument violates an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),
    /// A checked algebraic claim does not hold.
    #[error("verification failure: {0}")]
    Verification(String),
    /// Malformed polynomial, composition or labeling text.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    /// An internal consistency check failed; indicates a bug.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
