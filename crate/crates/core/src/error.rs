use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("the zero polynomial has no roots")]
    ZeroPolynomial,

    #[error("interval is empty: lo = {lo} must be strictly below hi = {hi}")]
    EmptyInterval { lo: f64, hi: f64 },

    #[error("no real root detected")]
    NoRealRoot,

    #[error("root index {index} out of range for degree {degree}")]
    RootIndexOutOfRange { index: usize, degree: usize },

    #[error("barrier function evaluated at a root of the polynomial (x = {0})")]
    AtRoot(f64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is zero")]
    ZeroMatrix,

    #[error("matrix is singular")]
    Singular,

    #[error("enumerating {count} cases exceeds the cap of {cap}")]
    EnumerationCap { count: u128, cap: u128 },

    #[error("column index {index} out of range for {cols} columns")]
    IndexOutOfRange { index: usize, cols: usize },

    #[error("column index {0} appears twice")]
    DuplicateIndex(usize),

    #[error("matrix is not isotropic: max |BB^T - I| = {0:e}")]
    NotIsotropic(f64),

    #[error("inexact polynomial division: remainder {remainder:e} exceeds tolerance {tolerance:e}")]
    InexactDivision { remainder: f64, tolerance: f64 },

    #[error("k = {k} exceeds {what} = {value}")]
    RankExceeded { k: usize, what: &'static str, value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
