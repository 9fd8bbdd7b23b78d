use thiserror::Error;

/// Errors raised by p-adic arithmetic, counting, root isolation and certification.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("operands live over different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),

    #[error("precision must be at least 1 (got {0})")]
    InvalidPrecision(u32),

    #[error("division by an element that vanishes to working precision")]
    DivisionByAmbiguousZero,

    #[error("quotient leaves Z_p")]
    NotDivisible,

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("root splitting failed after {0} random trials")]
    RandomnessBudgetExhausted(usize),

    #[error("derivative vanishes to working precision")]
    SingularDerivative,

    #[error("subdivision exceeded depth {0}: near-singular root (condition number at least p^{1})")]
    MaxDepthExceeded(u32, u32),

    #[error("certificate check failed on ball {0}")]
    CertificationFailed(String),
}

impl Error {
    pub(crate) fn exhausted(what: impl Into<String>) -> Self {
        Error::PrecisionExhausted(what.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
