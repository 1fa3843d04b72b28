use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid interval [{a}, {b}]: left end exceeds right end")]
    MalformedInterval { a: f64, b: f64 },

    #[error("window width must be positive, got {0}")]
    NonPositiveWidth(f64),

    #[error("{escaped} of mass lies outside the binning range [{lo}, {hi})")]
    MassOutsideRange { escaped: f64, lo: f64, hi: f64 },

    #[error("negative weight {0} in measure combination")]
    NegativeWeight(f64),

    #[error("empty continuity ladder")]
    EmptyLadder,

    #[error("continuity ladder must be positive and strictly decreasing")]
    UnsortedLadder,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operator is not Hermitian: asymmetry {asymmetry:e} exceeds {tolerance:e}")]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("B is not positive semidefinite: min eigenvalue {min_eig:e}")]
    NotPositiveSemidefinite { min_eig: f64 },

    #[error("eigensolver did not converge for matrix {hash}")]
    NoConvergence { hash: String },

    #[error("invalid weight profile: {0}")]
    InvalidProfile(String),

    #[error("invalid quadrature rule: {0}")]
    InvalidRule(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("size cap exceeded: {size} > {cap}")]
    SizeCap { size: usize, cap: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
