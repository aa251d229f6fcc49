use thiserror::Error;

/// Errors raised by the library. CLI exit codes are derived from these in [`crate::cli`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix or vector entries must be finite")]
    NonFinite,
    #[error("expected {expected} entries, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error("dimension must be positive")]
    EmptyDimension,
    #[error("zero vector has no dyadic projector")]
    ZeroVector,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("shape mismatch: {0:?} vs {1:?}")]
    ShapeMismatch((usize, usize), (usize, usize)),
    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("port {port} out of range for dimension {dim}")]
    PortOutOfRange { port: usize, dim: usize },
    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("index {0} out of range")]
    BadIndex(usize),
    #[error("invalid rotation axes ({a}, {b}) for dimension {dim}")]
    BadAxes { a: usize, b: usize, dim: usize },
    #[error("invalid eigenvalue labels: {0}")]
    BadLabels(String),
    #[error("analyzer does not diagonalize the observable (off-diagonal {0:e})")]
    NotDiagonalized(f64),
    #[error("diagonal entry {row} is {got}, outcome labels give {expected}")]
    LabelMismatch { row: usize, got: f64, expected: f64 },
    #[error("transmission {0} outside [0, 1]")]
    BadTransmission(f64),
    #[error("invalid context graph: {0}")]
    InvalidGraph(String),
    #[error("could not fit a beam-splitter cell: {0}")]
    FitFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
