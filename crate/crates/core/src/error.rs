use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the domain of the formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// The coupling reached (or crossed) the critical point, where the
    /// effective squeezing description breaks down.
    #[error("coupling ratio g/g_c = {ratio} is at or beyond the critical point")]
    Critical { ratio: f64 },

    /// The truncated Fock basis cannot hold the state within budget.
    #[error(
        "truncation at n_max = {n_max} loses norm {deficit:e} (budget {budget:e}); increase n_max"
    )]
    Truncation {
        n_max: usize,
        deficit: f64,
        budget: f64,
    },

    /// Finite-difference step control gave up.
    #[error("finite-difference step control failed: {0}")]
    StepControl(String),

    /// A time integrator left its accuracy envelope.
    #[error("integrator failure: {0}")]
    Integrator(String),

    /// An iterative procedure did not converge.
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    /// A numerically impossible result; indicates a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
