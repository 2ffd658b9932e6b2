use thiserror::Error;

/// Errors raised by the decision procedures and numeric kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("expected a positive rational, got {0}")]
    NonPositive(String),
    #[error("invalid minimal polynomial: {0}")]
    InvalidField(String),
    #[error("minimal polynomial is reducible: divisible by {0}")]
    Reducible(String),
    #[error("root hint rejected: {0}")]
    RootHint(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("classification undecided at the {cap}-bit precision cap")]
    Undecided { cap: u32 },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("subset sweep limited to {cap} polynomials, got {size}")]
    SubsetCap { size: usize, cap: usize },
    #[error("lattice basis is linearly dependent")]
    DependentBasis,
    #[error("precision too low: {0}")]
    PrecisionTooLow(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("vector is not in the nullspace of the class system")]
    NotInNullspace,
    #[error("polynomials are not equivalent: {0}")]
    NotEquivalent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
