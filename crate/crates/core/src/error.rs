use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A point or mode belongs to a different manifold than the one requested.
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    /// The operation needs at least one eigenfunction in the band.
    #[error("band at lambda = {0} contains no modes")]
    EmptyBand(f64),
    /// Two independent evaluations of the same quantity disagree.
    #[error("numerical disagreement: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
