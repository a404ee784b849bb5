use thiserror::Error;

/// Errors raised by the library. Every variant names the precondition that failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-contract input.
    #[error("input error: {0}")]
    Input(String),
    /// The rank-2 lattice spanned by v and a is not hyperbolic.
    #[error("wall lattice is not hyperbolic (determinant {det} >= 0)")]
    NotHyperbolic { det: String },
    /// A quotient by zero was required, e.g. a central charge with (Ω, v) = 0.
    #[error("singular input: {0}")]
    Singular(String),
    /// A wall hyperplane does not meet the requested ray family.
    #[error("no intersection: {0}")]
    NoIntersection(String),
    /// An iterative procedure did not terminate within its safety cap.
    #[error("iteration limit exceeded: {0}")]
    IterationLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
