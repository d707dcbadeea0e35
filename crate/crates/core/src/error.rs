use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown catalog function `{0}`")]
    UnknownFunction(String),

    #[error("point or region outside the domain of `{0}`")]
    OutOfDomain(String),

    #[error("quadrature did not converge (value {value}, last change {change:e}, {refinements} refinements)")]
    NonConvergence { value: f64, change: f64, refinements: usize },

    #[error("integral diverges")]
    Divergent,

    #[error("oracle violation: {0}")]
    OracleViolation(String),

    #[error("ill-conditioned Gram matrix (condition estimate {0:e})")]
    IllConditioned(f64),

    #[error("degenerate polytope: {0}")]
    DegeneratePolytope(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence { .. } | Error::Divergent | Error::IllConditioned(_) | Error::OracleViolation(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
