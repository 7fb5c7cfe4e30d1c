//! Characteristic polynomials, elementary symmetric functions, rank
//! functionals and the bivariate determinant `det(xI − C + tM)`.

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, SymmetricMatrix};
use crate::poly::{kth_largest_root, real_roots, Polynomial, DEFAULT_EPSILON};
use crate::scalar::Scalar;

/// Hard limit on the number of cases any enumeration may visit.
pub const ENUMERATION_CAP: u128 = 1_000_000;

/// `det(xI − A)` by the Faddeev–LeVerrier recurrence.
pub fn char_poly<T: Scalar>(a: &SymmetricMatrix<T>) -> Polynomial<T> {
    let n = a.dim();
    let a = a.as_matrix();
    let mut coeffs = vec![T::zero(); n + 1];
    coeffs[n] = T::one();
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = a * &m;
        for i in 0..n {
            let v = next.get(i, i).clone() + coeffs[n - k + 1].clone();
            next.set(i, i, v);
        }
        let tr = (a * &next).trace();
        coeffs[n - k] = -(tr / T::from_count(k));
        m = next;
    }
    Polynomial::new(coeffs)
}

/// `[e_0, e_1, …, e_d]` of the eigenvalues of `a`.
pub fn elementary_symmetric<T: Scalar>(a: &SymmetricMatrix<T>) -> Vec<T> {
    let p = char_poly(a);
    let d = a.dim();
    (0..=d)
        .map(|l| {
            let c = p.coeff(d - l);
            if l % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect()
}

/// `C(n, k)` as an exact integer, saturating at `u128::MAX`.
pub fn count_subsets(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// `n^k`, saturating at `u128::MAX`.
pub fn count_sequences(n: usize, k: usize) -> u128 {
    (0..k)
        .try_fold(1u128, |acc, _| acc.checked_mul(n as u128))
        .unwrap_or(u128::MAX)
}

pub(crate) fn check_cap(count: u128) -> Result<()> {
    if count > ENUMERATION_CAP {
        Err(Error::EnumerationCap {
            count,
            cap: ENUMERATION_CAP,
        })
    } else {
        Ok(())
    }
}

/// Both sides of Cauchy–Binet for `e_ℓ(BᵀB)`: the symmetric function and the
/// sum of principal `ℓ × ℓ` Gram minors.
pub fn cauchy_binet_check<T: Scalar>(b: &Matrix<T>, l: usize) -> Result<(T, T)> {
    let (d, m) = (b.rows(), b.cols());
    if l > d.min(m) {
        return Err(Error::InvalidArgument(format!(
            "l = {l} exceeds min(d, m) = {}",
            d.min(m)
        )));
    }
    check_cap(count_subsets(m, l))?;
    let lhs = elementary_symmetric(&b.gram())[l].clone();
    if l == 0 {
        return Ok((lhs, T::one()));
    }
    let mut rhs = T::zero();
    for subset in (0..m).combinations(l) {
        let sub = b.select_columns(&subset)?;
        rhs = rhs + sub.gram().as_matrix().determinant()?;
    }
    Ok((lhs, rhs))
}

/// `det(xI − C + tM)`: for each power of `x`, a polynomial in `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariatePolynomial<T = f64> {
    x_coeffs: Vec<Polynomial<T>>,
}

impl<T: Scalar> BivariatePolynomial<T> {
    pub fn new(x_coeffs: Vec<Polynomial<T>>) -> Self {
        Self { x_coeffs }
    }

    /// Degree in `x`.
    pub fn degree(&self) -> usize {
        self.x_coeffs.len() - 1
    }

    /// The coefficient of `x^i`, as a polynomial in `t`.
    pub fn x_coeff(&self, i: usize) -> &Polynomial<T> {
        &self.x_coeffs[i]
    }

    pub fn x_coeffs(&self) -> &[Polynomial<T>] {
        &self.x_coeffs
    }

    /// Substitute `t`, leaving a polynomial in `x`.
    pub fn at_t(&self, t: &T) -> Polynomial<T> {
        Polynomial::new(self.x_coeffs.iter().map(|c| c.eval(t)).collect())
    }

    /// Apply a linear functional to every `t`-coefficient.
    pub fn reduce_t(&self, f: impl Fn(&Polynomial<T>) -> T) -> Polynomial<T> {
        Polynomial::new(self.x_coeffs.iter().map(f).collect())
    }
}

/// `det(xI − C + tM)` by evaluating `char_poly(C − t_j M)` at `t_j = 0, …, d`
/// and interpolating each coefficient.
pub fn bivariate_det<T: Scalar>(c: &SymmetricMatrix<T>, m: &SymmetricMatrix<T>) -> Result<BivariatePolynomial<T>> {
    let d = c.dim();
    if m.dim() != d {
        return Err(Error::Dimension(format!("C is {d}x{d} but M is {0}x{0}", m.dim())));
    }
    let nodes: Vec<T> = (0..=d).map(T::from_count).collect();
    let samples: Vec<Polynomial<T>> = nodes
        .par_iter()
        .map(|t| c.sub_scaled(m, t).map(|a| char_poly(&a)))
        .collect::<Result<_>>()?;
    let x_coeffs = (0..=d)
        .map(|i| {
            let values: Vec<T> = samples.iter().map(|p| p.coeff(i)).collect();
            newton_interpolate(&nodes, &values)
        })
        .collect();
    Ok(BivariatePolynomial { x_coeffs })
}

/// Interpolating polynomial through `(nodes[j], values[j])` via divided
/// differences, expanded to monomial form.
pub fn newton_interpolate<T: Scalar>(nodes: &[T], values: &[T]) -> Polynomial<T> {
    assert_eq!(nodes.len(), values.len(), "node/value length mismatch");
    let n = nodes.len();
    let mut dd = values.to_vec();
    for level in 1..n {
        for j in (level..n).rev() {
            dd[j] = (dd[j].clone() - dd[j - 1].clone()) / (nodes[j].clone() - nodes[j - level].clone());
        }
    }
    // Horner on the Newton basis.
    let mut p = Polynomial::zero();
    for j in (0..n).rev() {
        p = &(&p * &Polynomial::linear_factor(nodes[j].clone())) + &Polynomial::constant(dd[j].clone());
    }
    p
}

/// Eigenvalues of a symmetric matrix, ascending with multiplicity, from the
/// roots of its characteristic polynomial.
pub fn eigenvalues<T: Scalar>(a: &SymmetricMatrix<T>) -> Result<Vec<f64>> {
    real_roots(&char_poly(a), DEFAULT_EPSILON)
}

/// `‖B‖₂²`, the largest eigenvalue of `BBᵀ`.
pub fn spectral_norm_sq<T: Scalar>(b: &Matrix<T>) -> Result<f64> {
    let p = char_poly(&b.outer_gram());
    kth_largest_root(&p, 1, DEFAULT_EPSILON * 1e-3)
}

/// `‖B‖_F² / ‖B‖₂²`.
pub fn stable_rank<T: Scalar>(b: &Matrix<T>) -> Result<f64> {
    let fro = b.frobenius_sq().to_real();
    if fro == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    Ok(fro / spectral_norm_sq(b)?)
}

/// `Tr(BBᵀ)² / Tr((BBᵀ)²)`.
pub fn stable_rank4<T: Scalar>(b: &Matrix<T>) -> Result<f64> {
    kappa(&b.outer_gram()).map_err(|_| Error::ZeroMatrix)
}

/// `Tr(A)² / Tr(A²)`.
pub fn kappa<T: Scalar>(a: &SymmetricMatrix<T>) -> Result<f64> {
    let tr = a.trace();
    if tr.is_zero() {
        return Err(Error::InvalidArgument("kappa of a matrix with zero trace".into()));
    }
    Ok((tr.clone() * tr / a.trace_of_square()).to_real())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn sym(rows: &[&[f64]]) -> SymmetricMatrix {
        SymmetricMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(
            char_poly(&SymmetricMatrix::<f64>::identity(2)).coeffs(),
            &[1.0, -2.0, 1.0]
        );
        assert_eq!(
            char_poly(&SymmetricMatrix::diagonal(&[1.0, 2.0])).coeffs(),
            &[2.0, -3.0, 1.0]
        );
        assert_eq!(char_poly(&SymmetricMatrix::<f64>::zeros(3)), Polynomial::monomial(3));
    }

    #[test]
    fn char_poly_vanishes_at_eigenvalues() {
        let diag = [0.5, -1.25, 3.0, 2.0];
        let p = char_poly(&SymmetricMatrix::diagonal(&diag));
        for l in diag {
            assert!(p.eval(&l).abs() < 1e-8);
        }
    }

    #[test]
    fn elementary_symmetric_examples() {
        let e = elementary_symmetric(&SymmetricMatrix::diagonal(&[1.0, 2.0, 3.0]));
        assert_eq!(e, vec![1.0, 6.0, 11.0, 6.0]);
        let e = elementary_symmetric(&SymmetricMatrix::<f64>::identity(4));
        assert_eq!(e, vec![1.0, 4.0, 6.0, 4.0, 1.0]);
        let u = Matrix::from_rows(vec![vec![1.0], vec![2.0], vec![-1.0]]).unwrap();
        let e = elementary_symmetric(&u.outer_gram());
        assert!((e[1] - 6.0).abs() < 1e-12);
        assert!(e[2].abs() < 1e-12 && e[3].abs() < 1e-12);
    }

    #[test]
    fn cauchy_binet_examples() {
        let id = Matrix::<f64>::identity(2);
        assert_eq!(cauchy_binet_check(&id, 1).unwrap(), (2.0, 2.0));
        assert_eq!(cauchy_binet_check(&id, 2).unwrap(), (1.0, 1.0));
        let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
        let b = Matrix::from_rows(vec![
            vec![q(1, 2), q(-3, 1), q(2, 3), q(1, 1)],
            vec![q(0, 1), q(5, 4), q(-1, 1), q(7, 3)],
        ])
        .unwrap();
        let (lhs, rhs) = cauchy_binet_check(&b, 2).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn cauchy_binet_respects_cap() {
        let b = Matrix::<f64>::zeros(30, 60);
        assert!(matches!(cauchy_binet_check(&b, 15), Err(Error::EnumerationCap { .. })));
    }

    #[test]
    fn bivariate_examples() {
        let biv = bivariate_det(&SymmetricMatrix::<f64>::zeros(2), &SymmetricMatrix::identity(2)).unwrap();
        assert_eq!(biv.x_coeff(2).coeffs(), &[1.0]);
        assert_eq!(biv.x_coeff(1).coeffs(), &[0.0, 2.0]);
        assert_eq!(biv.x_coeff(0).coeffs(), &[0.0, 0.0, 1.0]);

        let biv = bivariate_det(&sym(&[&[1.0]]), &sym(&[&[2.0]])).unwrap();
        assert_eq!(biv.x_coeff(1).coeffs(), &[1.0]);
        assert_eq!(biv.x_coeff(0).coeffs(), &[-1.0, 2.0]);
    }

    #[test]
    fn bivariate_matches_two_by_two_expansion() {
        let c = sym(&[&[1.5, -0.5], &[-0.5, 2.0]]);
        let m = sym(&[&[0.25, 0.75], &[0.75, -1.0]]);
        let biv = bivariate_det(&c, &m).unwrap();
        for t in [-1.3, 0.0, 0.4, 2.7] {
            // det [[x - a + t p, -b + t q], [-b + t q, x - e + t r]]
            let (a, b, e) = (1.5, -0.5, 2.0);
            let (p, q, r) = (0.25, 0.75, -1.0);
            let s = -a + t * p;
            let o = -b + t * q;
            let u = -e + t * r;
            let expect = [s * u - o * o, s + u, 1.0];
            let got = biv.at_t(&t);
            for i in 0..3 {
                assert!((got.coeff(i) - expect[i]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let target = Polynomial::new(vec![1.0, -2.0, 0.5, 3.0]);
        let nodes: Vec<f64> = (0..4).map(|i| i as f64).collect();
        let values: Vec<f64> = nodes.iter().map(|t| target.eval(t)).collect();
        assert!(newton_interpolate(&nodes, &values).relative_distance(&target) < 1e-12);
    }

    #[test]
    fn rank_functionals() {
        let id = Matrix::<f64>::identity(3);
        assert!((stable_rank(&id).unwrap() - 3.0).abs() < 1e-8);
        assert!((stable_rank4(&id).unwrap() - 3.0).abs() < 1e-12);

        let b = Matrix::from_rows(vec![vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!((stable_rank(&b).unwrap() - 1.25).abs() < 1e-8);

        let rank1 = Matrix::from_rows(vec![vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]]).unwrap();
        assert!((stable_rank(&rank1).unwrap() - 1.0).abs() < 1e-8);

        let b = Matrix::from_rows(vec![vec![2.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        assert!((stable_rank4(&b).unwrap() - 2.0).abs() < 1e-12);
        assert!(matches!(
            stable_rank(&Matrix::<f64>::zeros(2, 2)),
            Err(Error::ZeroMatrix)
        ));
    }

    #[test]
    fn kappa_examples() {
        assert!((kappa(&SymmetricMatrix::<f64>::identity(5)).unwrap() - 5.0).abs() < 1e-12);
        let k = kappa(&SymmetricMatrix::diagonal(&[2.0, 1.0, 1.0])).unwrap();
        assert!((k - 16.0 / 6.0).abs() < 1e-12);
        assert!(kappa(&SymmetricMatrix::<f64>::zeros(2)).is_err());
    }

    #[test]
    fn subset_counts() {
        assert_eq!(count_subsets(6, 2), 15);
        assert_eq!(count_subsets(3, 5), 0);
        assert_eq!(count_sequences(3, 2), 9);
        assert_eq!(count_sequences(10, 0), 1);
    }
}
