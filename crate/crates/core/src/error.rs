use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid cube: {0}")]
    InvalidCube(String),
    #[error("unsupported cube: {0}")]
    UnsupportedCube(String),
    #[error("unsupported dilation: {0}")]
    UnsupportedDilation(String),
    #[error("invalid grid function: {0}")]
    InvalidFunction(String),
    #[error("incompatible space: {0}")]
    IncompatibleSpace(String),
    #[error("invalid space parameters: {0}")]
    InvalidSpace(String),
    #[error("invalid Young function: {0}")]
    InvalidYoungFunction(String),
    #[error("numeric overflow: {0}")]
    NumericOverflow(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("invalid corpus spec: {0}")]
    InvalidSpec(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NumericOverflow(_) | Error::NonConvergence(_) | Error::Quadrature(_)
        )
    }
}
