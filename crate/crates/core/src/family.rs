//! The two interlacing families: column sequences drawn with replacement
//! and column subsets drawn without.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expected::{check_isotropic, conditional_expected, jacobi_family_poly};
use crate::matrix::Matrix;
use crate::poly::Polynomial;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    With,
    Without,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::With => "with",
            Mode::Without => "without",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "with" | "with_replacement" => Ok(Mode::With),
            "without" | "without_replacement" => Ok(Mode::Without),
            other => Err(Error::InvalidArgument(format!(
                "unknown mode {other:?}; use with or without"
            ))),
        }
    }
}

/// A rooted tree of polynomials indexed by partial column assignments. Leaves
/// sit at depth [`depth`](Self::depth); each internal node is the average of
/// its children.
pub trait InterlacingFamily<T: Scalar>: Sync {
    fn matrix(&self) -> &Matrix<T>;

    fn depth(&self) -> usize;

    fn mode(&self) -> Mode;

    /// Indices that may extend `prefix` by one level.
    fn children(&self, prefix: &[usize]) -> Vec<usize>;

    fn node(&self, prefix: &[usize]) -> Result<Polynomial<T>>;

    /// Weight of each child in the parent's average.
    fn child_weight(&self, prefix: &[usize]) -> T {
        T::one() / T::from_count(self.children(prefix).len())
    }
}

/// Sequences `s₁, …, s_k ∈ [m]` with `f_{s₁..s_j}` the conditional expectation.
#[derive(Clone, Debug)]
pub struct WithReplacement<'a, T> {
    b: &'a Matrix<T>,
    k: usize,
}

impl<'a, T: Scalar> WithReplacement<'a, T> {
    pub fn new(b: &'a Matrix<T>, k: usize) -> Result<Self> {
        validate_depth(b, k)?;
        Ok(Self { b, k })
    }
}

impl<T: Scalar> InterlacingFamily<T> for WithReplacement<'_, T> {
    fn matrix(&self) -> &Matrix<T> {
        self.b
    }

    fn depth(&self) -> usize {
        self.k
    }

    fn mode(&self) -> Mode {
        Mode::With
    }

    fn children(&self, _prefix: &[usize]) -> Vec<usize> {
        (0..self.b.cols()).collect()
    }

    fn node(&self, prefix: &[usize]) -> Result<Polynomial<T>> {
        conditional_expected(self.b, prefix, self.k)
    }
}

/// Subsets `T ⊆ [m]` of size at most `k` of an isotropic matrix.
#[derive(Clone, Debug)]
pub struct WithoutReplacement<'a, T> {
    b: &'a Matrix<T>,
    k: usize,
}

impl<'a, T: Scalar> WithoutReplacement<'a, T> {
    pub fn new(b: &'a Matrix<T>, k: usize) -> Result<Self> {
        validate_depth(b, k)?;
        if b.rows() > b.cols() {
            return Err(Error::Dimension(format!(
                "isotropic needs m >= d, got d={} m={}",
                b.rows(),
                b.cols()
            )));
        }
        check_isotropic(b)?;
        Ok(Self { b, k })
    }
}

impl<T: Scalar> InterlacingFamily<T> for WithoutReplacement<'_, T> {
    fn matrix(&self) -> &Matrix<T> {
        self.b
    }

    fn depth(&self) -> usize {
        self.k
    }

    fn mode(&self) -> Mode {
        Mode::Without
    }

    fn children(&self, prefix: &[usize]) -> Vec<usize> {
        (0..self.b.cols()).filter(|i| !prefix.contains(i)).collect()
    }

    fn node(&self, prefix: &[usize]) -> Result<Polynomial<T>> {
        jacobi_family_poly(self.b, prefix, self.k)
    }
}

fn validate_depth<T: Scalar>(b: &Matrix<T>, k: usize) -> Result<()> {
    let (d, m) = (b.rows(), b.cols());
    if k == 0 || k > d.min(m) {
        return Err(Error::InvalidArgument(format!(
            "k must satisfy 1 <= k <= min(d, m) = {}, got {k}",
            d.min(m)
        )));
    }
    Ok(())
}
