use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero vector has no primitive part")]
    ZeroVector,
    #[error("degenerate wall: {0}")]
    DegenerateWall(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("not a cone of the fan: {0:?}")]
    NotACone(Vec<usize>),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unsupported surface (rho(S) != 2): star of {tau:?} has {rays} rays")]
    UnsupportedSurface { tau: Vec<usize>, rays: usize },
    #[error("ray {0} is not contractible: {1}")]
    NotContractible(usize, String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
