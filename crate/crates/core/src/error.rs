use thiserror::Error;

/// Errors surfaced by the exact and Monte Carlo computations.
///
/// Everything here is a caller-input problem (bad dimensions, parameters out
/// of the weight's domain, budgets exceeded); internal invariant violations
/// panic instead.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("partition not contained in the required box or shape: {0}")]
    Containment(String),

    #[error("resource budget exceeded: {0}")]
    Resource(String),

    #[error("asymptotic order starvation: need the series through O(N^-{required}) but only {available} orders are available")]
    OrderStarvation { required: u32, available: u32 },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
