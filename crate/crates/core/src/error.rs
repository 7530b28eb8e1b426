use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument sits on a pole of the function being evaluated.
    #[error("pole: {0}")]
    Pole(String),
    /// An iteration did not reach its tolerance within its budget.
    #[error("no convergence: {0}")]
    Convergence(String),
    /// The construction degenerates (e.g. an operator coefficient vanishes identically).
    #[error("degenerate: {0}")]
    Degenerate(String),
    /// A documented precondition was violated; the message names it.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The point is an ordinary point of the operator.
    #[error("not a singular point: {0}")]
    NotSingular(String),
    /// The point is an irregular singular point of the operator.
    #[error("irregular singular point: {0}")]
    Irregular(String),
    /// The leading recurrence coefficient vanishes at index `n`.
    #[error("leading recurrence coefficient vanishes at n = {n}")]
    DegenerateIndex { n: usize },
    /// The scheme does not support the requested operation.
    #[error("unsupported scheme: {0}")]
    UnsupportedScheme(String),
    /// The reference point makes the reconstruction formula singular.
    #[error("singular reference point: {0}")]
    SingularRef(String),
    /// The point lies outside the region where the construction is valid.
    #[error("outside region: {0}")]
    Region(String),
    /// Evaluation produced a non-finite value.
    #[error("evaluation failed: {0}")]
    Evaluation(String),
    /// No candidate roots exist.
    #[error("no roots: {0}")]
    NoRoots(String),
    /// An integration path passes through or too close to a singular point.
    #[error("path passes near singular point {0}")]
    SingularPath(String),
    /// Adaptive step size collapsed.
    #[error("step size underflow at {0}")]
    StepUnderflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
