use thiserror::Error;

/// Errors raised by series arithmetic, enumeration and the identity checkers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The caller asked for something ill-formed: mismatched orders, bad
    /// parameters, an unknown identifier.
    #[error("usage error: {0}")]
    Usage(String),
    /// An operation received a value outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A substitution needs operand coefficients that were never computed.
    #[error("insufficient precision: operand truncated at q^{available}, need q^{needed}")]
    InsufficientPrecision { needed: usize, available: usize },
    #[error("coefficient q^{index} is beyond truncation order {order}")]
    OutOfRange { index: usize, order: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
