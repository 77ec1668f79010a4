use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid modulus: {0}")]
    BadModulus(String),

    #[error("operands belong to different fields")]
    MixedFields,

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("division by the zero polynomial")]
    ZeroDivisor,

    /// A parameter falls outside the hypotheses of the operation, e.g. `requires k < n`.
    #[error("{0}")]
    Domain(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    /// An enumeration would visit more instances than allowed. This never
    /// means "no solution"; the search was not run.
    #[error("enumeration of {needed} instances exceeds budget {budget}")]
    BudgetExceeded { needed: BigUint, budget: u64 },

    /// A statement that is proven to hold was observed to fail.
    #[error("invariant breach: {0}")]
    InvariantBreach(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
}

/// Default cap on the number of instances a single enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Returns `needed` as a machine integer if it fits in `budget`.
pub fn check_budget(needed: &BigUint, budget: u64) -> Result<u64> {
    match u64::try_from(needed) {
        Ok(n) if n <= budget => Ok(n),
        _ => Err(Error::BudgetExceeded {
            needed: needed.clone(),
            budget,
        }),
    }
}
