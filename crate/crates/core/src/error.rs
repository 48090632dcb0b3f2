use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("columns are not orthonormal (‖UᵀU − I‖_F = {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("rank deficient: |R[{index},{index}]| = {value:e} below tolerance {tol:e}")]
    RankDeficient { index: usize, value: f64, tol: f64 },

    #[error("assignment has more rows ({rows}) than columns ({cols})")]
    MoreRowsThanCols { rows: usize, cols: usize },

    #[error("brute-force assignment supports at most 6x7, got {rows}x{cols}")]
    SizeLimit { rows: usize, cols: usize },

    #[error("universe size {d} is smaller than object {object} with {points} points")]
    UniverseTooSmall {
        object: usize,
        points: usize,
        d: usize,
    },

    #[error("universe size {d} exceeds the total number of points {m}")]
    UniverseTooLarge { d: usize, m: usize },

    #[error("invalid matches between objects {i} and {j}: {reason}")]
    InvalidMatch { i: usize, j: usize, reason: String },

    #[error("invalid universe matching: {0}")]
    InvalidUniverse(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape_err(expected: impl Into<String>, found: impl Into<String>) -> Error {
    Error::ShapeMismatch {
        expected: expected.into(),
        found: found.into(),
    }
}
