use thiserror::Error;

/// Error type shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A profile violates its single-bump/normalization invariants.
    #[error("inconsistent profile: {0}")]
    Inconsistency(String),
    /// Evaluation at a point where a denominator degenerates.
    #[error("singular evaluation: {0}")]
    Singularity(String),
    /// The genericity constant vanishes.
    #[error("non-generic profile: {0}")]
    Genericity(String),
    /// The profile shape does not admit the requested construction.
    #[error("shape error: {0}")]
    Shape(String),
    /// Coordinate outside the represented range.
    #[error("out of range: {0}")]
    Range(String),
    /// Gamma function pole.
    #[error("pole: {0}")]
    Pole(String),
    /// Evaluation on a branch cut.
    #[error("branch cut: {0}")]
    BranchCut(String),
    /// Adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    /// Newton iteration did not converge.
    #[error("no convergence: {0}")]
    Convergence(String),
    /// Invalid run or solver configuration.
    #[error("config error: {0}")]
    Config(String),
    /// Conserved-quantity drift beyond tolerance.
    #[error("instability: {0}")]
    Instability(String),
    /// Irregular spacing where a uniform ladder is required.
    #[error("spacing error: {0}")]
    Spacing(String),
    /// Operation not supported by this profile.
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    /// Malformed cache or config text.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
