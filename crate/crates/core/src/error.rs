use thiserror::Error;

/// Errors raised by the bound evaluators and the brute-force oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A hypothesis of the lemma being evaluated does not hold.
    #[error("{lemma}: hypothesis `{condition}` violated ({detail})")]
    Hypothesis {
        lemma: &'static str,
        condition: &'static str,
        detail: String,
    },

    /// A query reached past the precomputed prime table.
    #[error("value {requested} exceeds table capacity {limit}")]
    Capacity { requested: u64, limit: u64 },

    /// An enumeration would exceed its configured guard.
    #[error("enumeration of {requested} items exceeds guard {guard}")]
    GuardExceeded { requested: u128, guard: u128 },

    /// The parameter `r` is not admissible for one differencing step.
    #[error("invalid r = {r} for k = {k}, delta = {delta}: {reason}")]
    InvalidR {
        k: u32,
        r: u32,
        delta: f64,
        reason: &'static str,
    },

    /// A differencing step failed to lower the exponent surplus.
    #[error("no improvement at k = {k}, n = {n}: delta {before} -> {after}")]
    NoImprovement { k: u32, n: u64, before: f64, after: f64 },

    /// The exponent obtained is too weak for the target denominator.
    #[error("exponent {exponent:e} is below the target {target:e}")]
    Infeasible { exponent: f64, target: f64 },

    /// An argument lies outside the domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// Exact integer arithmetic overflowed.
    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    /// Adaptive quadrature did not reach its tolerance.
    #[error("quadrature did not converge on [{a}, {b}]")]
    Quadrature { a: f64, b: f64 },

    /// A checked inequality or identity failed.
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn hypothesis(lemma: &'static str, condition: &'static str, detail: String) -> Error {
    Error::Hypothesis {
        lemma,
        condition,
        detail,
    }
}
