use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("evaluation on the real axis where the remainder function is singular")]
    OnAxis,
    #[error("evaluation at a branch point t = ±1")]
    BranchPoint,
    #[error("degenerate root: |d(R^2)/dt| = {0:.3e}")]
    DegenerateRoot(f64),
    #[error("degenerate parameterization: |tangent|^2 = {0:.3e}")]
    DegenerateParameterization(f64),
    #[error("degenerate anisotropy ratio k = {0:.3e}")]
    DegenerateAnisotropy(f64),
    #[error("target coincides with a quadrature node")]
    SingularPoint,
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
