use thiserror::Error;

/// Errors raised by graph, divisor, orientation and poset operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A relation handed to the poset builder is not a partial order.
    #[error("not a partial order: {0}")]
    PosetAxiom(String),
    /// An equivalence relation fails the lifting hypothesis needed to form the quotient poset.
    #[error("quotient lifting hypothesis fails: {0}")]
    Lifting(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
