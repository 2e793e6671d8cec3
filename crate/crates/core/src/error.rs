use thiserror::Error;

/// Errors produced by the statistics library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Arguments are valid but outside the region where the chosen
    /// evaluation method is reliable.
    #[error("range error: {0}")]
    Range(String),

    /// Parameter set violates its invariants.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Quadrature did not reach the requested tolerance.
    #[error("integration did not converge: estimate {estimate:e}, error bound {error_bound:e} after {subdivisions} subdivisions")]
    Integration {
        estimate: f64,
        error_bound: f64,
        subdivisions: usize,
    },

    /// A result that must be a probability fell outside `[0, 1]` by more than
    /// rounding can explain.
    #[error("numerical consistency error: {0}")]
    NumericalConsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}
