use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("local dimension must be at least 2, got {0}")]
    InvalidDimension(usize),
    #[error("qudit count must be at least 1")]
    NoQudits,
    #[error("d^n = {d}^{n} exceeds the dimension cap {cap}")]
    DimensionCap { d: usize, n: usize, cap: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("operation requires odd local dimension, got d = {0}")]
    EvenDimension(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("operator is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("generators {0} and {1} do not commute")]
    NonCommutingGenerators(usize, usize),
    #[error("generators are dependent: group order {found} instead of {expected}")]
    DependentGenerators { found: usize, expected: usize },
    #[error("generator phases are inconsistent: {0}")]
    InconsistentPhases(String),
    #[error("matrix is not symplectic (deviation {0:.3e})")]
    NotSymplectic(f64),
    #[error("state has zero quasiprobability norm")]
    ZeroNorm,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
