//! Restricted invertibility via interlacing families.

pub mod bounds;
pub mod charpoly;
pub mod cli;
pub mod error;
pub mod expected;
pub mod family;
pub mod generate;
pub mod matrix;
pub mod oracle;
pub mod poly;
pub mod scalar;
pub mod select;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{Matrix, RationalMatrix, RealMatrix, SymmetricMatrix};
pub use poly::Polynomial;
pub use scalar::{Rational, Scalar};
