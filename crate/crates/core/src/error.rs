use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("coefficient matrix has no rows")]
    EmptyMatrix,

    #[error("ground set of size {0} exceeds the supported maximum of 64")]
    GroundSetTooLarge(usize),

    #[error("exponent matrix has rank {rank} but {rows} rows; the monomial parametrization is not injective")]
    ExponentRankDeficient { rank: usize, rows: usize },

    #[error("exponent matrix has repeated columns {0} and {1}")]
    DuplicateColumns(usize, usize),

    #[error("conservation matrix does not annihilate the stoichiometric matrix (W·N ≠ 0)")]
    ConservationMismatch,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("decorated simplex {cell} maps to {point}, which is not a reported intersection point")]
    ComparisonViolated { cell: String, point: String },

    #[error("enumeration routes disagree: {0}")]
    OracleMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
