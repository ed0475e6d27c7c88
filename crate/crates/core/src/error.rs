use thiserror::Error;

/// Errors raised by the interval constructions and their numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature hit its subdivision limit.
    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound}")]
    NonConvergence { estimate: f64, error_bound: f64 },

    /// The root finder was handed an interval without a sign change.
    #[error("no sign change on [{lo}, {hi}]: g(lo) = {g_lo}, g(hi) = {g_hi}")]
    Bracket {
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },

    /// The root finder exhausted its iteration budget.
    #[error("root finding did not converge after {iterations} iterations (best {best})")]
    RootNotConverged { iterations: usize, best: f64 },

    /// A target confidence cannot be met inside the search range.
    #[error("no solution: {0}")]
    NoSolution(String),

    /// A structural precondition (e.g. a local minimum) does not hold.
    #[error("condition failed: {0}")]
    Condition(String),

    /// The observation coincides with the center, so the interval collapses.
    #[error("degenerate observation: x equals the center a")]
    DegenerateObservation,

    /// The density is outside the class an operation supports.
    #[error("unsupported density {name}: {reason}")]
    UnsupportedDensity { name: String, reason: String },

    /// Unknown density family name.
    #[error("unknown density family `{0}`")]
    UnknownFamily(String),

    /// Invalid simulation or strategy configuration.
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
