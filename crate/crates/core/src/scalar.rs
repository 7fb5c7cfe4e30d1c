//! Coefficient field abstraction.
//!
//! Everything polynomial or matrix valued in this crate is generic over
//! [`Scalar`], which is implemented for `f64` (the main path) and for
//! [`Rational`] (exact mode, used by the oracles whenever inputs are rational).

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// True when arithmetic is exact and "negligible" means "zero".
    const EXACT: bool;

    /// Whether `self` is zero up to `rel_tol * |scale|`. Exact scalars ignore
    /// the tolerance.
    fn is_negligible(&self, scale: &Self, rel_tol: f64) -> bool;

    fn from_int(n: i64) -> Self {
        <Self as FromPrimitive>::from_i64(n).expect("integer is representable")
    }

    fn from_count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("integer is representable")
    }

    /// Exact conversion from a finite float.
    fn from_real(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("finite float")
    }

    fn to_real(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact rational value (floats are dyadic rationals).
    fn to_rational(&self) -> Rational;

    /// Nearest representable value.
    fn from_rational(r: &Rational) -> Self;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn is_negligible(&self, scale: &Self, rel_tol: f64) -> bool {
        self.abs() <= rel_tol * scale.abs()
    }

    fn to_rational(&self) -> Rational {
        Rational::from_float(*self).expect("finite float")
    }

    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn is_negligible(&self, _scale: &Self, _rel_tol: f64) -> bool {
        self.is_zero()
    }

    fn to_rational(&self) -> Rational {
        self.clone()
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

/// `n!` as a scalar, built as a running product.
pub fn factorial<T: Scalar>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, i| acc * T::from_count(i))
}

/// `lo * (lo + 1) * ... * hi`, or one when the range is empty.
pub fn rising_product<T: Scalar>(lo: usize, hi: usize) -> T {
    (lo..=hi).fold(T::one(), |acc, i| acc * T::from_count(i))
}

pub fn binomial<T: Scalar>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * T::from_count(n - i) / T::from_count(i + 1);
    }
    acc
}

/// Parse a decimal (`-1.25e3`), integer, or `p/q` token exactly.
pub fn parse_rational(token: &str) -> Option<Rational> {
    let token = token.trim();
    if token.is_empty() {
        return None;
    }
    if let Some((num, den)) = token.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    let (mantissa, exponent) = match token.find(['e', 'E']) {
        Some(pos) => (&token[..pos], token[pos + 1..].parse::<i32>().ok()?),
        None => (token, 0),
    };
    if exponent.abs() > 4096 {
        return None;
    }
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let digits = digits / BigInt::from(10);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(digits);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn parses_rational_tokens() {
        assert_eq!(parse_rational("3/4"), Some(q(3, 4)));
        assert_eq!(parse_rational("-2/6"), Some(q(-1, 3)));
        assert_eq!(parse_rational("0.1"), Some(q(1, 10)));
        assert_eq!(parse_rational("-1.25e2"), Some(q(-125, 1)));
        assert_eq!(parse_rational("5e-1"), Some(q(1, 2)));
        assert_eq!(parse_rational("7"), Some(q(7, 1)));
        assert_eq!(parse_rational(".5"), Some(q(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn combinatorics() {
        assert_eq!(factorial::<f64>(5), 120.0);
        assert_eq!(binomial::<f64>(6, 2), 15.0);
        assert_eq!(binomial::<f64>(2, 3), 0.0);
        assert_eq!(rising_product::<f64>(4, 6), 120.0);
        assert_eq!(rising_product::<f64>(5, 4), 1.0);
        assert_eq!(binomial::<Rational>(10, 4), q(210, 1));
    }
}
