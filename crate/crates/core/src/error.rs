use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{what}: series did not converge within {terms} terms")]
    NonConvergent { what: &'static str, terms: usize },

    #[error("{what}: argument {arg} outside the validated range (cancellation bound {bound:.3e})")]
    RangeWarning { what: &'static str, arg: f64, bound: f64 },

    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("beta mismatch: {0} vs {1}")]
    BetaMismatch(f64, f64),

    #[error("degree {degree} exceeds the moment budget {budget}")]
    DegreeOverflow { degree: usize, budget: usize },

    #[error("output degree {degree} exceeds the truncation capacity {capacity}")]
    TruncationOverflow { degree: usize, capacity: usize },

    #[error("argument outside the exponential domain: {0}")]
    OutsideDomain(String),

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("beta {0} outside the supported range")]
    BetaOutOfRange(f64),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
