use thiserror::Error;

use crate::dos::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A parameter lies outside its mathematical domain.
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("density of states failed validation: {0}")]
    InvalidDos(ValidationReport),

    /// An integral over an unbounded support does not converge.
    #[error("divergent integral: {0}")]
    Divergent(String),

    /// `exp` of the given natural-log exponent would leave the f64 range.
    #[error("overflow evaluating profile at eps = {eps}: log-exponent {exponent} exceeds {limit}")]
    Overflow { eps: f64, exponent: f64, limit: f64 },

    #[error("adaptive quadrature did not converge: estimate {estimate}, error {error_estimate} after {intervals} intervals")]
    Quadrature {
        estimate: f64,
        error_estimate: f64,
        intervals: usize,
    },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("not found: {0}")]
    NotFound(String),

    /// The discrete entropy difference used for T or mu vanished or hit an infeasible neighbour.
    #[error("degenerate difference quotient: {0}")]
    DegenerateDifference(String),

    #[error("truncated grand sum: tail bound {tail_bound:e} exceeds tolerance {tolerance:e}")]
    Truncation { tail_bound: f64, tolerance: f64 },

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("at temperature T = {temperature}: {source}")]
    AtTemperature {
        temperature: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("at schedule index {index}: {source}")]
    AtIndex {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::ParameterDomain(msg.into())
    }
}
