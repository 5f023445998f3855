use thiserror::Error;

/// Errors raised by the numerical layers and the command-line frontend.
#[derive(Debug, Error)]
pub enum Error {
    #[error("symplectic eigenvalues could not be paired: {0}")]
    Pairing(String),

    #[error("covariance matrix is not positive definite (min eigenvalue {0:e})")]
    NonPositive(f64),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("unknown subsystem label `{0}`")]
    Label(String),

    #[error("negative evolution time {0}")]
    NegativeTime(f64),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("grid too small: {0}")]
    GridTooSmall(String),

    #[error("grid spacings differ: {0} vs {1}")]
    SpacingMismatch(f64, f64),

    #[error("truncation tail mass {mass:e} exceeds {limit:e} (cutoff {cutoff})")]
    Tail { mass: f64, limit: f64, cutoff: usize },

    #[error("eigenvalue {0:e} below the clamp threshold; raise the cutoff")]
    NegativeEigenvalue(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("quadrature too coarse: {0}")]
    Quadrature(String),

    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),

    #[error("infinite entropy: {0}")]
    InfiniteEntropy(String),

    #[error("Fisher estimate did not converge: value {value}, uncertainty {uncertainty}")]
    Convergence { value: f64, uncertainty: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("{0}")]
    Usage(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
