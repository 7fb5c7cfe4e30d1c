//! Dense row-major matrices over a [`Scalar`].

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Relative tolerance for accepting a float matrix as symmetric.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T = f64> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// A `d × m` column matrix `B` in the main floating-point path.
pub type RealMatrix = Matrix<f64>;

/// Exact counterpart of [`RealMatrix`].
pub type RationalMatrix = Matrix<Rational>;

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("matrix must be nonempty, got {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.to_real().is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|row| row.len() != c) {
            return Err(Error::Dimension(format!(
                "row {bad} has {} entries, expected {c}",
                rows[bad].len()
            )));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * rhs.get(l, j).clone();
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> RealMatrix {
        self.map(|v| v.to_real())
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn frobenius_sq(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, v| acc + v.clone() * v.clone())
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .map(|v| v.abs())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// Columns listed in `indices`, in order. Indices must be in range.
    pub fn select_columns(&self, indices: &[usize]) -> Result<Self> {
        for &j in indices {
            if j >= self.cols {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    cols: self.cols,
                });
            }
        }
        if indices.is_empty() {
            return Err(Error::Dimension("empty column selection".into()));
        }
        let mut out = Self::zeros(self.rows, indices.len());
        for i in 0..self.rows {
            for (c, &j) in indices.iter().enumerate() {
                out.set(i, c, self.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// `BᵀB`, the `m × m` Gram matrix of the columns.
    pub fn gram(&self) -> SymmetricMatrix<T> {
        SymmetricMatrix::from_product(&self.transpose(), self)
    }

    /// `BBᵀ = Σ u_i u_iᵀ`.
    pub fn outer_gram(&self) -> SymmetricMatrix<T> {
        SymmetricMatrix::from_product(self, &self.transpose())
    }

    /// Largest entry of `|BBᵀ − I|`.
    pub fn isotropy_defect(&self) -> T {
        (self.outer_gram().as_matrix() - &Self::identity(self.rows)).max_abs()
    }

    /// Determinant by Gaussian elimination (partial pivoting by magnitude).
    pub fn determinant(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| {
                    a.get(x, col)
                        .abs()
                        .partial_cmp(&a.get(y, col).abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .expect("nonempty range");
            if a.get(pivot, col).is_zero() {
                return Ok(T::zero());
            }
            if pivot != col {
                a.swap_rows(pivot, col);
                det = -det;
            }
            let p = a.get(col, col).clone();
            det = det * p.clone();
            for r in col + 1..n {
                let f = a.get(r, col).clone() / p.clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = a.get(r, c).clone() - f.clone() * a.get(col, c).clone();
                    a.set(r, c, v);
                }
            }
        }
        Ok(det)
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.max_abs();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| {
                    a.get(x, col)
                        .abs()
                        .partial_cmp(&a.get(y, col).abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .expect("nonempty range");
            if a.get(pivot, col).is_negligible(&scale, 1e-14) {
                return Err(Error::Singular);
            }
            a.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let p = a.get(col, col).clone();
            for c in 0..n {
                a.set(col, c, a.get(col, c).clone() / p.clone());
                inv.set(col, c, inv.get(col, c).clone() / p.clone());
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    a.set(r, c, a.get(r, c).clone() - f.clone() * a.get(col, c).clone());
                    inv.set(r, c, inv.get(r, c).clone() - f.clone() * inv.get(col, c).clone());
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.zip_with(rhs, |a, b| a.clone() + b.clone())
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.zip_with(rhs, |a, b| a.clone() - b.clone())
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.matmul(rhs).expect("shape mismatch")
    }
}

/// A square symmetric matrix; symmetrized exactly on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix<T = f64> {
    inner: Matrix<T>,
}

impl<T: Scalar> SymmetricMatrix<T> {
    /// Accepts `a` if `|a_ij − a_ji| ≤ 1e−12 · max |a|` (exactly equal for
    /// rationals) and replaces both entries by their average.
    pub fn new(a: Matrix<T>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension(format!(
                "symmetric matrix must be square, got {}x{}",
                a.rows, a.cols
            )));
        }
        let scale = a.max_abs();
        let mut worst = T::zero();
        for i in 0..a.rows {
            for j in i + 1..a.rows {
                let gap = (a.get(i, j).clone() - a.get(j, i).clone()).abs();
                if gap > worst {
                    worst = gap;
                }
            }
        }
        if !worst.is_negligible(&scale, SYMMETRY_TOLERANCE) {
            return Err(Error::NotSymmetric(worst.to_real()));
        }
        Ok(Self::symmetrized(a))
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn diagonal(values: &[T]) -> Self {
        let n = values.len();
        let mut m = Matrix::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        Self { inner: m }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: Matrix::identity(n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            inner: Matrix::zeros(n, n),
        }
    }

    /// `Σ_{i ∈ indices} u_i u_iᵀ` over columns of `b`; repeats count repeatedly.
    pub fn rank_one_sum(b: &Matrix<T>, indices: &[usize]) -> Result<Self> {
        let d = b.rows();
        let mut out: Matrix<T> = Matrix::zeros(d, d);
        for &j in indices {
            if j >= b.cols() {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    cols: b.cols(),
                });
            }
            let u = b.column(j);
            for r in 0..d {
                if u[r].is_zero() {
                    continue;
                }
                for c in 0..d {
                    let v = out.get(r, c).clone() + u[r].clone() * u[c].clone();
                    out.set(r, c, v);
                }
            }
        }
        Ok(Self::symmetrized(out))
    }

    fn from_product(a: &Matrix<T>, b: &Matrix<T>) -> Self {
        Self::symmetrized(a * b)
    }

    fn symmetrized(mut a: Matrix<T>) -> Self {
        let two = T::from_int(2);
        for i in 0..a.rows {
            for j in i + 1..a.rows {
                let avg = (a.get(i, j).clone() + a.get(j, i).clone()) / two.clone();
                a.set(i, j, avg.clone());
                a.set(j, i, avg);
            }
        }
        Self { inner: a }
    }

    pub fn dim(&self) -> usize {
        self.inner.rows
    }

    pub fn as_matrix(&self) -> &Matrix<T> {
        &self.inner
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        self.inner.get(i, j)
    }

    pub fn trace(&self) -> T {
        self.inner.trace()
    }

    /// `Tr(A²) = Σ a_ij²` for symmetric `A`.
    pub fn trace_of_square(&self) -> T {
        self.inner.frobenius_sq()
    }

    pub fn scale(&self, c: &T) -> Self {
        Self {
            inner: self.inner.scale(c),
        }
    }

    pub fn to_f64(&self) -> SymmetricMatrix<f64> {
        SymmetricMatrix {
            inner: self.inner.to_f64(),
        }
    }

    /// `self − t · other`.
    pub fn sub_scaled(&self, other: &Self, t: &T) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!("dimension {} vs {}", self.dim(), other.dim())));
        }
        Ok(Self {
            inner: &self.inner - &other.inner.scale(t),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> RealMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert!(Matrix::<f64>::new(0, 2, vec![]).is_err());
        assert!(Matrix::new(2, 2, vec![1.0; 3]).is_err());
        assert!(matches!(
            Matrix::new(1, 2, vec![1.0, f64::NAN]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        assert!(Matrix::from_rows(vec![vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn products_and_grams() {
        let b = m(&[&[1.0, 2.0, 0.0], &[0.0, 1.0, 1.0]]);
        let bbt = b.outer_gram();
        assert_eq!(bbt.as_matrix(), &m(&[&[5.0, 2.0], &[2.0, 2.0]]));
        let btb = b.gram();
        assert_eq!(btb.dim(), 3);
        assert_eq!(*btb.get(1, 1), 5.0);
        assert_eq!(b.frobenius_sq(), 7.0);
        let ros = SymmetricMatrix::rank_one_sum(&b, &[0, 1, 2]).unwrap();
        assert_eq!(ros, bbt);
        let twice = SymmetricMatrix::rank_one_sum(&b, &[1, 1]).unwrap();
        assert_eq!(*twice.get(0, 0), 8.0);
    }

    #[test]
    fn symmetry_check() {
        assert!(SymmetricMatrix::new(m(&[&[1.0, 2.0], &[2.0 + 1e-14, 1.0]])).is_ok());
        assert!(matches!(
            SymmetricMatrix::new(m(&[&[1.0, 2.0], &[2.1, 1.0]])),
            Err(Error::NotSymmetric(_))
        ));
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[&[2.0, 1.0], &[1.0, 3.0]]);
        assert!((a.determinant().unwrap() - 5.0).abs() < 1e-14);
        let inv = a.inverse().unwrap();
        let id = &a * &inv;
        assert!((&id - &Matrix::identity(2)).max_abs() < 1e-14);
        let sing = m(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert_eq!(sing.determinant().unwrap(), 0.0);
        assert!(matches!(sing.inverse(), Err(Error::Singular)));
    }

    #[test]
    fn column_selection() {
        let b = m(&[&[1.0, 2.0, 3.0]]);
        assert_eq!(b.select_columns(&[2, 0]).unwrap(), m(&[&[3.0, 1.0]]));
        assert!(matches!(
            b.select_columns(&[3]),
            Err(Error::IndexOutOfRange { index: 3, cols: 3 })
        ));
    }
}
