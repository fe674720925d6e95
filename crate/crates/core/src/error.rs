use thiserror::Error;

/// Errors produced by the workbench.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (wrong degree, out-of-range index, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Operands live in different ambient dimensions.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    /// Two independent routes to the same quantity disagree. Signals a convention bug.
    #[error("consistency check failed: {what} (residual {residual:e}, tolerance {tol:e})")]
    Consistency {
        what: String,
        residual: f64,
        tol: f64,
    },

    /// The right-hand side of a d-equation carries cohomology and has no preimage.
    #[error("not exact: {0}")]
    NotExact(String),

    /// An invalid model or geometric object (Jacobi violation, degenerate simplex, ...).
    #[error("invalid model: {0}")]
    Model(String),

    /// The mollifier is too wide for the requested support margin.
    #[error("support violation: {0}")]
    SupportViolation(String),

    /// A piecewise-linear approximation could not meet its error budget.
    #[error("refinement failed: {0}")]
    Refinement(String),

    /// The chain passes through a projection center even after resampling the grid offset.
    #[error("degenerate position: {0}")]
    Degenerate(String),

    /// A certificate check found a violation; `witness` locates it.
    #[error("certification failed: {what} at {witness:?}")]
    Certification { what: String, witness: Vec<f64> },

    /// A precondition on the input data was not met.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A requested configuration is outside what is implemented.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
