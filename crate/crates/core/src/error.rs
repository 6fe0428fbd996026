use thiserror::Error;

/// Errors surfaced by the numerical kernels.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {message}")]
    InvalidParameter { name: &'static str, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge: {0}")]
    QuadratureAccuracy(String),

    #[error("no unit crossing of the ball-mass ratio inside [{lo:.3e}, {hi:.3e}]")]
    NoCrossing { lo: f64, hi: f64 },

    #[error("eigensolver failed: {0}")]
    EigenSolve(String),

    #[error("ground level numerically degenerate: gap {gap:.3e} below {threshold:.3e}")]
    DegenerateGround { gap: f64, threshold: f64 },

    #[error(
        "lambda = {re:.6e} + {im:.6e}i too close to the spectrum (nearest eigenvalue {nearest:.12e})"
    )]
    SpectralProximity { re: f64, im: f64, nearest: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("linear solve failed: {0}")]
    LinearSolve(String),

    #[error(
        "eigen-expansion tail {tail:.3e} above threshold {threshold:.3e}; supply more eigenpairs or channels"
    )]
    TruncationTail { tail: f64, threshold: f64 },

    #[error(
        "positivity violated after {retries} step-halving retries: min {min:.3e} at node {node}"
    )]
    Positivity { min: f64, node: usize, retries: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter { name, message: message.into() }
    }
}
