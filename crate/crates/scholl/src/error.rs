use thiserror::Error;

/// Every failure the library reports. The CLI maps `Usage`/`Domain` to exit
/// code 2 and the mathematical kinds to exit code 1.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime (divisible by {1})")]
    NotPrime(u64, u64),
    #[error("modulus is reducible over F_{p}: nontrivial factor {factor:?}")]
    Reducible { p: u64, factor: Vec<u64> },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("precision error: {0}")]
    Precision(String),
    #[error("ambiguous: {0}")]
    Ambiguity(String),
    #[error("inconsistent: {0}")]
    Inconsistency(String),
    /// An external resource (network, file) could not be reached.
    #[error("unavailable: {0}")]
    Unavailable(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }

    /// Whether the error signals bad input rather than a failed computation.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::NotPrime(..) | Error::Reducible { .. } | Error::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
