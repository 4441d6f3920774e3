use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Operands that cannot be combined (different algebra kinds, sizes, ...).
    #[error("structural mismatch: {0}")]
    Structural(String),

    /// Element not invertible in the ambient algebra. `measure` is the
    /// smallest singular value or the infimum of |a(t)|.
    #[error("element is not invertible: measured {measure:e} <= threshold {threshold:e}")]
    NotInvertible { measure: f64, threshold: f64 },

    /// Parameters outside the domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// Local refinement of an extremum did not converge.
    #[error("refinement did not converge; last bracket [{lo}, {hi}]")]
    NonConvergent { lo: f64, hi: f64 },

    /// An iterative eigen or series computation failed numerically.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// The Neumann series ran out of terms or of its truncation budget.
    #[error("series truncated: {reason}; achieved residual {achieved:e}")]
    Truncation { reason: String, achieved: f64 },

    /// Infinite product does not converge (requires v < 1).
    #[error("product diverges: v = {0} must be < 1")]
    Divergence(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
