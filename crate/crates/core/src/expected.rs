//! Expected characteristic polynomials and the classical polynomials they
//! reduce to.

use crate::charpoly::{bivariate_det, char_poly, elementary_symmetric};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, SymmetricMatrix};
use crate::poly::{smallest_root, Polynomial};
use crate::scalar::{binomial, factorial, rising_product, Scalar};

/// Largest `|BBᵀ − I|` entry accepted as isotropic in floating point.
pub const ISOTROPY_TOLERANCE: f64 = 1e-8;

/// Fails unless `BBᵀ = I` (within [`ISOTROPY_TOLERANCE`]; exactly for rationals).
pub fn check_isotropic<T: Scalar>(b: &Matrix<T>) -> Result<()> {
    let defect = b.isotropy_defect();
    if defect.is_negligible(&T::one(), ISOTROPY_TOLERANCE) {
        Ok(())
    } else {
        Err(Error::NotIsotropic(defect.to_real()))
    }
}

fn check_indices<T: Scalar>(b: &Matrix<T>, indices: &[usize]) -> Result<()> {
    match indices.iter().find(|&&i| i >= b.cols()) {
        Some(&index) => Err(Error::IndexOutOfRange { index, cols: b.cols() }),
        None => Ok(()),
    }
}

/// `(1 − ∂_t)^{k−j} det(xI − C + tM)` at `t = 0`, with `C` the sum of
/// `u_s u_sᵀ` over the assigned columns and `M = BBᵀ/m`: the expected
/// characteristic polynomial once the remaining `k − j` columns are drawn
/// uniformly with replacement.
pub fn conditional_expected<T: Scalar>(b: &Matrix<T>, assigned: &[usize], k: usize) -> Result<Polynomial<T>> {
    let (d, m) = (b.rows(), b.cols());
    let j = assigned.len();
    if j > k {
        return Err(Error::InvalidArgument(format!("{j} columns assigned but k = {k}")));
    }
    if k > d {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds d = {d}")));
    }
    check_indices(b, assigned)?;
    let c = SymmetricMatrix::rank_one_sum(b, assigned)?;
    if j == k {
        return Ok(char_poly(&c));
    }
    let mm = b.outer_gram().scale(&(T::one() / T::from_count(m)));
    let biv = bivariate_det(&c, &mm)?;
    let n = k - j;
    // (1 − ∂t)^n at t = 0 sends t^l to (−1)^l C(n, l) l!.
    let weights: Vec<T> = (0..=n)
        .map(|l| {
            let w = binomial::<T>(n, l) * factorial::<T>(l);
            if l % 2 == 0 {
                w
            } else {
                -w
            }
        })
        .collect();
    Ok(biv.reduce_t(|q| {
        q.coeffs()
            .iter()
            .zip(&weights)
            .fold(T::zero(), |acc, (c, w)| acc + c.clone() * w.clone())
    }))
}

/// `(1 − ∂/m)^k x^d`.
pub fn laguerre_operator_poly<T: Scalar>(d: usize, k: usize, m: usize) -> Result<Polynomial<T>> {
    if k > d || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "need k <= d and m >= 1, got d={d} k={k} m={m}"
        )));
    }
    let lambda = T::one() / T::from_count(m);
    let mut p = Polynomial::monomial(d);
    for _ in 0..k {
        p = crate::poly::one_minus_lambda_deriv(&p, &lambda);
    }
    Ok(p)
}

/// `L_n^{(α)}(x) = x^{−α} (∂ − 1)^n x^{n+α} / n!` for integer `α ≥ 0`.
pub fn associated_laguerre<T: Scalar>(n: usize, alpha: usize) -> Result<Polynomial<T>> {
    let mut p = Polynomial::monomial(n + alpha);
    for _ in 0..n {
        p = &p.derivative() - &p;
    }
    Ok(p.div_x_pow(alpha)?.unscale(&factorial(n)))
}

/// `x^{d−k} ∏ᵢ (1 − λᵢ∂) x^k` with `d = eigs.len()`.
pub fn nonisotropic_expected<T: Scalar>(eigs: &[T], k: usize) -> Result<Polynomial<T>> {
    let d = eigs.len();
    if k > d {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds d = {d}")));
    }
    if eigs.iter().any(|l| l.is_negative()) {
        return Err(Error::InvalidArgument("eigenvalues must be nonnegative".into()));
    }
    let mut core = Polynomial::monomial(k);
    for l in eigs {
        core = crate::poly::one_minus_lambda_deriv(&core, l);
    }
    Ok(core.mul_x_pow(d - k))
}

/// Same as [`nonisotropic_expected`] with the eigenvalues of `m` entering
/// only through `e_l(M)`, so no root finding is needed (exact for rationals).
pub fn nonisotropic_expected_from_matrix<T: Scalar>(m: &SymmetricMatrix<T>, k: usize) -> Result<Polynomial<T>> {
    let d = m.dim();
    if k > d {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds d = {d}")));
    }
    // ∏(1 − λᵢ∂) = Σ_l (−1)^l e_l ∂^l
    let e = elementary_symmetric(m);
    let xk = Polynomial::<T>::monomial(k);
    let mut core = Polynomial::zero();
    for (l, el) in e.iter().enumerate().take(k + 1) {
        let term = xk.nth_derivative(l).scale(el);
        core = if l % 2 == 0 { &core + &term } else { &core - &term };
    }
    Ok(core.mul_x_pow(d - k))
}

/// Expected characteristic polynomial of `Σ_{i∈S} u_iu_iᵀ` over uniformly
/// random `k`-subsets `S ⊇ T`, for isotropic `B`:
/// `((m−k)!/(m−t)!) (x−1)^{−(m−d−k)} ∂^{k−t} (x−1)^{m−d−t} p_T`.
///
/// Negative exponents are handled by exact division: when `m − d − t < 0`,
/// `p_T` carries the factor `(x−1)^{d+t−m}` because `I − U_T` has rank at
/// most `m − t`.
pub fn jacobi_family_poly<T: Scalar>(b: &Matrix<T>, subset: &[usize], k: usize) -> Result<Polynomial<T>> {
    let (d, m) = (b.rows(), b.cols());
    let t = subset.len();
    if t > k {
        return Err(Error::InvalidArgument(format!("|T| = {t} exceeds k = {k}")));
    }
    if k > d || d > m {
        return Err(Error::InvalidArgument(format!(
            "need k <= d <= m, got k={k} d={d} m={m}"
        )));
    }
    check_indices(b, subset)?;
    for (pos, i) in subset.iter().enumerate() {
        if subset[..pos].contains(i) {
            return Err(Error::DuplicateIndex(*i));
        }
    }
    check_isotropic(b)?;

    let one = T::one();
    let p_t = char_poly(&SymmetricMatrix::rank_one_sum(b, subset)?);
    let shift = |p: &Polynomial<T>, e: isize| -> Result<Polynomial<T>> {
        if e >= 0 {
            Ok(p * &Polynomial::linear_factor(one.clone()).pow(e as usize))
        } else {
            p.div_linear_pow(&one, e.unsigned_abs())
        }
    };
    let (m_i, d_i, t_i, k_i) = (m as isize, d as isize, t as isize, k as isize);
    let lifted = shift(&p_t, m_i - d_i - t_i)?;
    let differentiated = lifted.nth_derivative(k - t);
    let f = shift(&differentiated, -(m_i - d_i - k_i))?;
    Ok(f.unscale(&rising_product(m - k + 1, m - t)))
}

/// `∂^d [(x−1)^{m−k} x^k]`, of degree `m − d`; its least root is `λ_k` of the
/// without-replacement expected polynomial.
pub fn jacobi_root_poly<T: Scalar>(d: usize, k: usize, m: usize) -> Result<Polynomial<T>> {
    if !(1 <= k && k <= d && d < m) {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k <= d < m, got d={d} k={k} m={m}"
        )));
    }
    let base = &Polynomial::linear_factor(T::one()).pow(m - k) * &Polynomial::monomial(k);
    Ok(base.nth_derivative(d))
}

/// `P_n^{(a,b)}(x) = ((−1)^n / (2^n n!)) (1−x)^{−a} (1+x)^{−b} ∂^n [(1−x)^{a+n} (1+x)^{b+n}]`.
pub fn jacobi_poly<T: Scalar>(n: usize, a: usize, b: usize) -> Result<Polynomial<T>> {
    let one_minus_x = Polynomial::new(vec![T::one(), -T::one()]);
    let one_plus_x = Polynomial::new(vec![T::one(), T::one()]);
    let inner = &one_minus_x.pow(a + n) * &one_plus_x.pow(b + n);
    let q = inner
        .nth_derivative(n)
        .exact_div(&one_minus_x.pow(a))?
        .exact_div(&one_plus_x.pow(b))?;
    let mut denom = factorial::<T>(n) * num_traits::pow(T::from_int(2), n);
    if n % 2 == 1 {
        denom = -denom;
    }
    Ok(q.unscale(&denom))
}

/// `λ_k` of a degree-`d` polynomial with `d − k` roots at zero: the least
/// root of `f / x^{d−k}`.
pub fn lambda_k<T: Scalar>(f: &Polynomial<T>, k: usize, eps: f64) -> Result<f64> {
    let d = f.degree();
    if k == 0 || k > d {
        return Err(Error::RootIndexOutOfRange { index: k, degree: d });
    }
    smallest_root(&f.div_x_pow(d - k)?, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{is_real_rooted, kth_largest_root, DEFAULT_CUTOFF};
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn qp(c: &[(i64, i64)]) -> Polynomial<Rational> {
        Polynomial::new(c.iter().map(|&(n, d)| q(n, d)).collect())
    }

    /// Rows of a 2×4 rational isotropic matrix.
    fn iso_2x4() -> Matrix<Rational> {
        let h = q(1, 2);
        Matrix::from_rows(vec![
            vec![h.clone(), h.clone(), h.clone(), h.clone()],
            vec![h.clone(), -h.clone(), h.clone(), -h],
        ])
        .unwrap()
    }

    #[test]
    fn full_assignment_is_char_poly() {
        let b = iso_2x4();
        let f = conditional_expected(&b, &[0, 3], 2).unwrap();
        let p = char_poly(&SymmetricMatrix::rank_one_sum(&b, &[0, 3]).unwrap());
        assert_eq!(f, p);
    }

    #[test]
    fn isotropic_root_is_laguerre_operator() {
        let b = iso_2x4();
        for k in 0..=2 {
            let f = conditional_expected(&b, &[], k).unwrap();
            assert_eq!(f, laguerre_operator_poly(2, k, 4).unwrap());
        }
    }

    #[test]
    fn laguerre_operator_examples() {
        assert_eq!(
            laguerre_operator_poly::<Rational>(2, 1, 5).unwrap(),
            qp(&[(0, 1), (-2, 5), (1, 1)])
        );
        assert_eq!(
            laguerre_operator_poly::<Rational>(3, 0, 7).unwrap(),
            Polynomial::monomial(3)
        );
        assert_eq!(
            laguerre_operator_poly::<Rational>(1, 1, 1).unwrap(),
            qp(&[(-1, 1), (1, 1)])
        );
        assert!(laguerre_operator_poly::<f64>(2, 3, 1).is_err());
    }

    #[test]
    fn associated_laguerre_examples() {
        assert_eq!(associated_laguerre::<Rational>(0, 4).unwrap(), Polynomial::one());
        assert_eq!(associated_laguerre::<Rational>(1, 3).unwrap(), qp(&[(4, 1), (-1, 1)]));
        // L_2^{(1)} = (x² − 6x + 6)/2
        assert_eq!(
            associated_laguerre::<Rational>(2, 1).unwrap(),
            qp(&[(3, 1), (-3, 1), (1, 2)])
        );
    }

    #[test]
    fn nonisotropic_examples() {
        let lam = vec![q(1, 4); 3];
        assert_eq!(
            nonisotropic_expected(&lam, 2).unwrap(),
            laguerre_operator_poly(3, 2, 4).unwrap()
        );
        assert_eq!(nonisotropic_expected(&[q(3, 7)], 1).unwrap(), qp(&[(-3, 7), (1, 1)]));
        let m = SymmetricMatrix::diagonal(&[q(1, 3), q(2, 5), q(0, 1)]);
        for k in 0..=3 {
            assert_eq!(
                nonisotropic_expected_from_matrix(&m, k).unwrap(),
                nonisotropic_expected(&[q(1, 3), q(2, 5), q(0, 1)], k).unwrap()
            );
        }
    }

    #[test]
    fn jacobi_family_leaf_and_root() {
        let b = iso_2x4();
        let leaf = jacobi_family_poly(&b, &[1, 2], 2).unwrap();
        assert_eq!(leaf, char_poly(&SymmetricMatrix::rank_one_sum(&b, &[1, 2]).unwrap()));
        // m − d − k = 0: f_∅ = ((m−k)!/m!) ∂^k (x−1)^{m−d} x^d
        let root = jacobi_family_poly(&b, &[], 2).unwrap();
        let base = &Polynomial::linear_factor(q(1, 1)).pow(2) * &Polynomial::monomial(2);
        assert_eq!(root, base.nth_derivative(2).unscale(&q(12, 1)));
    }

    #[test]
    fn jacobi_family_rejects_bad_input() {
        let b = iso_2x4();
        assert!(matches!(
            jacobi_family_poly(&b, &[0, 1, 2], 2),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            jacobi_family_poly(&b, &[1, 1], 2),
            Err(Error::DuplicateIndex(1))
        ));
        let skew = Matrix::from_rows(vec![vec![q(1, 1), q(1, 1)], vec![q(0, 1), q(1, 1)]]).unwrap();
        assert!(matches!(jacobi_family_poly(&skew, &[], 1), Err(Error::NotIsotropic(_))));
    }

    #[test]
    fn jacobi_family_square_case() {
        // m = d: every k-subset of an orthonormal basis has the same polynomial.
        let b = Matrix::<Rational>::identity(3);
        let f = jacobi_family_poly(&b, &[], 2).unwrap();
        let expect = &Polynomial::linear_factor(q(1, 1)).pow(2) * &Polynomial::monomial(1);
        assert_eq!(f, expect);
    }

    #[test]
    fn jacobi_root_poly_examples() {
        assert_eq!(jacobi_root_poly::<Rational>(1, 1, 2).unwrap(), qp(&[(-1, 1), (2, 1)]));
        let r = smallest_root(&jacobi_root_poly::<f64>(3, 2, 6).unwrap(), 1e-12).unwrap();
        let f = jacobi_family_poly(&crate::generate::gaussian_isotropic(3, 6, 11).unwrap(), &[], 2).unwrap();
        let lk = kth_largest_root(&f, 2, 1e-12).unwrap();
        assert!((r - lk).abs() < 1e-7, "{r} vs {lk}");
        assert!(jacobi_root_poly::<f64>(3, 2, 3).is_err());
    }

    #[test]
    fn jacobi_poly_examples() {
        assert_eq!(jacobi_poly::<Rational>(0, 2, 1).unwrap(), Polynomial::one());
        assert_eq!(jacobi_poly::<Rational>(1, 0, 0).unwrap(), Polynomial::monomial(1));
        // P_2^{(0,0)} = (3x² − 1)/2
        assert_eq!(
            jacobi_poly::<Rational>(2, 0, 0).unwrap(),
            qp(&[(-1, 2), (0, 1), (3, 2)])
        );
        // P_1^{(a,b)} = ((a − b) + (a + b + 2)x)/2
        assert_eq!(jacobi_poly::<Rational>(1, 1, 2).unwrap(), qp(&[(-1, 2), (5, 2)]));
    }

    #[test]
    fn jacobi_identity_small_case() {
        // P_k^{(m−d−k, d−k)}(2x − 1) = C(m,k) x^{−(d−k)} f_∅(x) for (m,d,k) = (5,3,2)
        let (m, d, k) = (5usize, 3usize, 2usize);
        let lhs = jacobi_poly::<Rational>(k, m - d - k, d - k)
            .unwrap()
            .compose_affine(&q(2, 1), &q(-1, 1));
        let base = &Polynomial::linear_factor(q(1, 1)).pow(m - d) * &Polynomial::monomial(d);
        let f = base
            .nth_derivative(k)
            .div_linear_pow(&q(1, 1), m - d - k)
            .unwrap()
            .unscale(&rising_product(m - k + 1, m));
        let rhs = f.div_x_pow(d - k).unwrap().scale(&binomial(m, k));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn lambda_k_divides_out_zero_roots() {
        let f = Polynomial::from_roots(&[0.0, 0.0, 0.5, 2.0]);
        assert!((lambda_k(&f, 2, 1e-12).unwrap() - 0.5).abs() < 1e-10);
        assert!(lambda_k(&f, 5, 1e-9).is_err());
        assert!(is_real_rooted(&f, DEFAULT_CUTOFF));
    }
}
