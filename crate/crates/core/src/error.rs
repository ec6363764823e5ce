use thiserror::Error;

/// Errors raised by geometry, oracles, subproblem solvers and the methods.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An argument violates an operation's precondition.
    #[error("rejected input: {0}")]
    RejectedInput(String),

    /// A configuration value is outside the supported range.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// The requested solver cannot handle this prox/set/model combination.
    #[error("unsupported combination: {0}")]
    Unsupported(String),

    /// A model's inner solver failed to reach its certified accuracy.
    #[error("oracle error: {message} (inner residual {residual:e})")]
    Oracle { message: String, residual: f64 },

    /// An iterative subproblem solver ran out of budget before certifying
    /// the requested accuracy. `achieved` is the best certified value.
    #[error("inexactness not certified: achieved {achieved:e}, target {target:e}")]
    InexactNotCertified { achieved: f64, target: f64 },

    /// Backtracking hit its doubling cap; the model violates its declared
    /// (delta, L) bounds.
    #[error("backtracking diverged at step {step} after {doublings} doublings (L = {l:e})")]
    Divergence { step: usize, doublings: u32, l: f64 },

    /// `alpha` or `A` left the floating-point range; the run cannot go on.
    #[error("step sizes left the floating-point range at step {step}")]
    RangeExhausted { step: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn reject<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::RejectedInput(msg.into()))
}
