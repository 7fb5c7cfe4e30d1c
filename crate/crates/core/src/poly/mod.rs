//! Dense univariate polynomials, the differential operators that act on them,
//! and Sturm-sequence root isolation.

mod roots;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use roots::{
    alpha_min, barrier_phi, is_real_rooted, kth_largest_root, real_roots, smallest_root, sturm_root_count, RootFinder,
    RootInterval, DEFAULT_CUTOFF, DEFAULT_EPSILON,
};

/// Relative tolerance for divisions that are exact in exact arithmetic.
pub const DIVISION_TOLERANCE: f64 = 1e-8;

/// Coefficients ascending by degree. The zero polynomial is `[0]`; otherwise
/// the last coefficient is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T = f64> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self {
            coeffs: vec![T::zero()],
        }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `x^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        Self { coeffs }
    }

    /// `x - root`.
    pub fn linear_factor(root: T) -> Self {
        Self::new(vec![-root, T::one()])
    }

    /// Monic polynomial with the given roots (repeated entries give multiplicity).
    pub fn from_roots(roots: &[T]) -> Self {
        roots
            .iter()
            .fold(Self::one(), |acc, r| &acc * &Self::linear_factor(r.clone()))
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn leading(&self) -> &T {
        self.coeffs.last().expect("never empty")
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Largest coefficient magnitude.
    pub fn norm_inf(&self) -> T {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * T::from_count(i))
            .collect();
        Self::new(coeffs)
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Divide every coefficient by `c`.
    pub fn unscale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() / c.clone()).collect())
    }

    pub fn make_monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.leading().clone();
        self.unscale(&lead)
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `x^k * p`.
    pub fn mul_x_pow(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![T::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs)
    }

    /// `p / x^k`, requiring the dropped low coefficients to be negligible.
    pub fn div_x_pow(&self, k: usize) -> Result<Self> {
        if k == 0 || self.is_zero() {
            return Ok(self.clone());
        }
        let scale = self.norm_inf();
        let remainder = self.coeffs[..k.min(self.coeffs.len())]
            .iter()
            .map(|c| c.abs())
            .fold(T::zero(), |a, b| if b > a { b } else { a });
        check_remainder(&remainder, &scale)?;
        if k >= self.coeffs.len() {
            return Ok(Self::zero());
        }
        Ok(Self::new(self.coeffs[k..].to_vec()))
    }

    /// Synthetic division by `(x - root)^times`, asserting each remainder is
    /// negligible relative to the dividend.
    pub fn div_linear_pow(&self, root: &T, times: usize) -> Result<Self> {
        let mut p = self.clone();
        for _ in 0..times {
            if p.is_zero() {
                return Ok(p);
            }
            let scale = p.norm_inf();
            let n = p.coeffs.len();
            let mut quotient = vec![T::zero(); n.saturating_sub(1).max(1)];
            let mut carry = T::zero();
            for i in (0..n).rev() {
                let value = p.coeffs[i].clone() + carry.clone() * root.clone();
                if i == 0 {
                    check_remainder(&value.abs(), &scale)?;
                } else {
                    quotient[i - 1] = value.clone();
                }
                carry = value;
            }
            p = Self::new(quotient);
        }
        Ok(p)
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree();
        if self.degree() < dd || self.is_zero() {
            return (Self::zero(), self.clone());
        }
        let lead = divisor.leading().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![T::zero(); self.degree() - dd + 1];
        for shift in (0..quot.len()).rev() {
            let factor = rem[shift + dd].clone() / lead.clone();
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] = rem[shift + j].clone() - factor.clone() * c.clone();
            }
            rem[shift + dd] = T::zero();
            quot[shift] = factor;
        }
        rem.truncate(dd.max(1));
        (Self::new(quot), Self::new(rem))
    }

    /// Division that must be exact up to [`DIVISION_TOLERANCE`].
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor);
        check_remainder(&r.norm_inf(), &self.norm_inf())?;
        Ok(q)
    }

    /// `p(a x + b)`.
    pub fn compose_affine(&self, a: &T, b: &T) -> Self {
        let inner = Self::new(vec![b.clone(), a.clone()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * &inner) + &Self::constant(c.clone()))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Polynomial<U> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }

    pub fn to_f64(&self) -> Polynomial<f64> {
        self.map(|c| c.to_real())
    }

    /// Largest coefficient difference relative to the larger norm.
    pub fn relative_distance(&self, other: &Self) -> f64 {
        let diff = (self - other).norm_inf().to_real();
        let scale = self.norm_inf().to_real().max(other.norm_inf().to_real());
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }
}

fn check_remainder<T: Scalar>(remainder: &T, scale: &T) -> Result<()> {
    if remainder.is_negligible(scale, DIVISION_TOLERANCE) {
        Ok(())
    } else {
        Err(Error::InexactDivision {
            remainder: remainder.to_real(),
            tolerance: DIVISION_TOLERANCE * scale.to_real(),
        })
    }
}

/// Coefficient-wise derivative.
pub fn derivative<T: Scalar>(p: &Polynomial<T>) -> Polynomial<T> {
    p.derivative()
}

/// `(1 - λ ∂x) p = p - λ p'`. Preserves degree and leading coefficient.
pub fn one_minus_lambda_deriv<T: Scalar>(p: &Polynomial<T>, lambda: &T) -> Polynomial<T> {
    p - &p.derivative().scale(lambda)
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn add(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn sub(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn mul(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl<T: Scalar> $tr for Polynomial<T> {
            type Output = Polynomial<T>;

            fn $method(self, rhs: Polynomial<T>) -> Polynomial<T> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Scalar> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn p(c: &[f64]) -> Polynomial {
        Polynomial::new(c.to_vec())
    }

    #[test]
    fn canonical_form() {
        assert_eq!(p(&[1.0, 0.0, 0.0]).coeffs(), &[1.0]);
        assert_eq!(p(&[]).coeffs(), &[0.0]);
        assert!(p(&[0.0, 0.0]).is_zero());
        assert_eq!(p(&[0.0, 0.0]).degree(), 0);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(derivative(&p(&[0.0, 0.0, 1.0])), p(&[0.0, 2.0]));
        assert_eq!(derivative(&p(&[5.0])), Polynomial::zero());
        assert_eq!(derivative(&p(&[0.0, -3.0, 0.0, 1.0])), p(&[-3.0, 0.0, 3.0]));
    }

    #[test]
    fn one_minus_lambda_deriv_examples() {
        let x2 = Polynomial::<f64>::monomial(2);
        assert_eq!(one_minus_lambda_deriv(&x2, &1.0), p(&[0.0, -2.0, 1.0]));
        let x5 = Polynomial::<f64>::monomial(5);
        let got = one_minus_lambda_deriv(&x5, &0.3);
        assert_eq!(got.coeffs()[5], 1.0);
        assert!((got.coeffs()[4] + 1.5).abs() < 1e-15);
        assert_eq!(got.coeffs()[..4], [0.0; 4]);
        let q = p(&[1.0, -2.0, 3.0]);
        assert_eq!(one_minus_lambda_deriv(&q, &0.0), q);
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1.0, 1.0]);
        let b = p(&[-1.0, 1.0]);
        assert_eq!(&a * &b, p(&[-1.0, 0.0, 1.0]));
        assert_eq!(&a + &b, p(&[0.0, 2.0]));
        assert_eq!(&a - &a, Polynomial::zero());
        assert_eq!(a.pow(3), p(&[1.0, 3.0, 3.0, 1.0]));
        assert_eq!(Polynomial::from_roots(&[1.0, 2.0]), p(&[2.0, -3.0, 1.0]));
    }

    #[test]
    fn division() {
        let num = p(&[-1.0, 0.0, 0.0, 1.0]);
        let (q, r) = num.div_rem(&p(&[-1.0, 1.0]));
        assert_eq!(q, p(&[1.0, 1.0, 1.0]));
        assert!(r.is_zero());
        assert!(num.exact_div(&p(&[1.0, 1.0])).is_err());
        assert_eq!(num.div_linear_pow(&1.0, 1).unwrap(), p(&[1.0, 1.0, 1.0]));
        let cube = p(&[-1.0, 3.0, -3.0, 1.0]);
        assert_eq!(cube.div_linear_pow(&1.0, 3).unwrap(), Polynomial::one());
        assert!(cube.div_linear_pow(&1.0, 4).is_err());
    }

    #[test]
    fn x_power_shifts() {
        let q = p(&[0.0, 0.0, 3.0, 1.0]);
        assert_eq!(q.div_x_pow(2).unwrap(), p(&[3.0, 1.0]));
        assert!(q.div_x_pow(3).is_err());
        assert_eq!(p(&[3.0, 1.0]).mul_x_pow(2), q);
    }

    #[test]
    fn affine_composition() {
        // (x^2)(2x - 1) = 4x^2 - 4x + 1
        let got = Polynomial::<f64>::monomial(2).compose_affine(&2.0, &-1.0);
        assert_eq!(got, p(&[1.0, -4.0, 4.0]));
    }

    #[test]
    fn exact_mode_division() {
        let q = |n: i64| Rational::from_integer(n.into());
        let num = Polynomial::new(vec![q(-1), q(0), q(1)]);
        let lin = Polynomial::new(vec![q(-1), q(1)]);
        assert_eq!(num.exact_div(&lin).unwrap(), Polynomial::new(vec![q(1), q(1)]));
        let off = Polynomial::new(vec![Rational::new(1.into(), 1_000_000_000_000i64.into()), q(0), q(1)]);
        assert!(off.div_x_pow(1).is_err());
    }
}
