use thiserror::Error;

/// Errors produced by the counting, constant and estimate routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    /// The prime table is too small for the requested computation.
    #[error("prime table limit {limit} is too small: {what} needs primes up to {needed}")]
    Capacity {
        what: &'static str,
        needed: u64,
        limit: u64,
    },

    #[error("{n} is outside the table range 2..={max}")]
    OutOfRange { n: u64, max: u64 },

    #[error("requested sieve limit {requested} exceeds the memory budget ({max})")]
    Budget { requested: u64, max: u64 },

    #[error("outside the domain: {0}")]
    Domain(String),

    #[error("prime zeta diverges at s = {0}")]
    Divergent(f64),

    #[error("invalid tolerance {0}: must be finite and at least 1e-12")]
    InvalidTolerance(f64),

    /// The requested tolerance cannot be met with the available prime table.
    #[error(
        "tolerance {requested:e} unachievable with sieve limit {limit}: best tail bound {achievable:e}, retry with a limit of at least {needed}"
    )]
    Tolerance {
        requested: f64,
        achievable: f64,
        limit: u64,
        needed: u64,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("inconsistent factorization: {0}")]
    Inconsistent(String),
}

impl Error {
    /// Sieve limit that would let the failed computation proceed, if known.
    pub fn needed_limit(&self) -> Option<u64> {
        match *self {
            Error::Capacity { needed, .. } | Error::Tolerance { needed, .. } => Some(needed),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
