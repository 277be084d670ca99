use thiserror::Error;

/// Errors produced by the algebra layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero in Q(q)")]
    DivisionByZero,

    #[error("value is not invertible: {0}")]
    NotInvertible(String),

    #[error("generator x[{row},{col}] out of bounds for a {m}x{n} shape")]
    GeneratorOutOfBounds {
        row: usize,
        col: usize,
        m: usize,
        n: usize,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("quantum determinant requires a square shape, got {m}x{n}")]
    NonSquareShape { m: usize, n: usize },

    #[error("minor index sets must be nonempty, in bounds and of equal size: {0}")]
    BadMinorIndex(String),

    #[error("invalid Plucker index: {0}")]
    BadPluckerIndex(String),

    #[error("straightening degree {degree} exceeds the configured cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },

    #[error("standard-basis solve failed (this would contradict the basis property): {0}")]
    BasisContradiction(String),

    #[error("unsupported scope: {0}")]
    UnsupportedScope(String),

    #[error("map is undefined on this input: {0}")]
    UndefinedOnInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
