use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid system shape {dims:?}: every subsystem dimension must be at least 2")]
    InvalidShape { dims: Vec<usize> },
    #[error("amplitude vector has length {got}, shape requires {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite amplitude at index {index}")]
    NonFinite { index: usize },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch { left: Vec<usize>, right: Vec<usize> },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("vector is not unit: norm {norm}")]
    NotUnit { norm: f64 },
    #[error("vector norm {norm} is too small to normalize")]
    Degenerate { norm: f64 },
    #[error("invalid bipartition {part_a:?} of {dims:?}")]
    InvalidBipartition { dims: Vec<usize>, part_a: Vec<usize> },
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix of size {size} exceeds the eigensolver limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("empty vector list")]
    Empty,
    #[error("input vectors are linearly dependent: numerical rank {rank} of {count}")]
    Dependent { rank: usize, count: usize },
    #[error("invalid predicate: {0}")]
    InvalidPredicate(String),
    #[error("index {index} out of range 0..{bound}")]
    OutOfRange { index: usize, bound: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("invalid product-term decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("basis is not orthonormal (max residual {residual:e})")]
    NotOrthonormal { residual: f64 },
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("duplicate vector label {0:?}")]
    DuplicateLabel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
