//! Reference computations for the integration tests, written without the
//! library's polynomial or root-finding code.

#![allow(dead_code)]

use itertools::Itertools;
use num_traits::{One, Zero};

use interlace::{Matrix, Rational};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// `Σ_{i∈S} u_iu_iᵀ` for the columns `u_i` of `b`.
pub fn outer_sum(b: &Matrix<Rational>, s: &[usize]) -> Vec<Vec<Rational>> {
    let d = b.rows();
    let mut c = vec![vec![Rational::zero(); d]; d];
    for &i in s {
        for r in 0..d {
            for t in 0..d {
                c[r][t] += b.get(r, i) * b.get(t, i);
            }
        }
    }
    c
}

/// Determinant by fraction-free-enough Gaussian elimination over rationals.
pub fn det(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut out = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            out = -out;
        }
        let p = a[col][col].clone();
        out *= &p;
        for r in col + 1..n {
            let f = &a[r][col] / &p;
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    out
}

/// Ascending coefficients of `det(xI − C)`: the coefficient of `x^{d−l}` is
/// `(−1)^l` times the sum of the `l × l` principal minors.
pub fn char_poly_by_minors(c: &[Vec<Rational>]) -> Vec<Rational> {
    let d = c.len();
    let mut coeffs = vec![Rational::zero(); d + 1];
    for l in 0..=d {
        let mut sum = Rational::zero();
        for s in (0..d).combinations(l) {
            let minor = s
                .iter()
                .map(|&i| s.iter().map(|&j| c[i][j].clone()).collect())
                .collect();
            sum += det(minor);
        }
        coeffs[d - l] = if l % 2 == 0 { sum } else { -sum };
    }
    coeffs
}

/// Average of `det(xI − Σ_{i∈S} u_iu_iᵀ)` over the given index lists.
pub fn average_char_poly(b: &Matrix<Rational>, sets: &[Vec<usize>]) -> Vec<Rational> {
    let d = b.rows();
    let mut acc = vec![Rational::zero(); d + 1];
    for s in sets {
        for (a, c) in acc.iter_mut().zip(char_poly_by_minors(&outer_sum(b, s))) {
            *a += c;
        }
    }
    let n = Rational::from_integer((sets.len() as i64).into());
    acc.into_iter().map(|a| a / &n).collect()
}

/// Coefficients padded with zeros to `len`.
pub fn padded<T: Clone + Zero>(c: &[T], len: usize) -> Vec<T> {
    let mut v = c.to_vec();
    v.resize(len.max(v.len()), T::zero());
    v
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut a = a.to_vec();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for r in p + 1..n {
                if a[p][r].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[r][r] - a[p][p]) / (2.0 * a[p][r]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akr) = (a[k][p], a[k][r]);
                    a[k][p] = c * akp - s * akr;
                    a[k][r] = s * akp + c * akr;
                }
                for k in 0..n {
                    let (apk, ark) = (a[p][k], a[r][k]);
                    a[p][k] = c * apk - s * ark;
                    a[r][k] = s * apk + c * ark;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// `σ_min(B_S)²` from the eigenvalues of the `k × k` Gram matrix.
pub fn sigma_min_sq(b: &Matrix<f64>, s: &[usize]) -> f64 {
    let d = b.rows();
    let gram: Vec<Vec<f64>> = s
        .iter()
        .map(|&i| {
            s.iter()
                .map(|&j| (0..d).map(|r| b.get(r, i) * b.get(r, j)).sum())
                .collect()
        })
        .collect();
    symmetric_eigenvalues(&gram)[0]
}

/// `A = BBᵀ` in floating point.
pub fn outer_gram(b: &Matrix<f64>) -> Vec<Vec<f64>> {
    let (d, m) = (b.rows(), b.cols());
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| (0..m).map(|c| b.get(i, c) * b.get(j, c)).sum())
                .collect()
        })
        .collect()
}

fn binom(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: u64) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// `L_n^{(α)}(x) = Σ_i (−1)^i C(n+α, n−i) x^i / i!`, ascending.
pub fn laguerre_series(n: usize, alpha: usize) -> Vec<f64> {
    (0..=n)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            sign * binom((n + alpha) as u64, (n - i) as u64) / factorial(i as u64)
        })
        .collect()
}

/// Ascending coefficients of `∂^d [(x−1)^{m−k} x^k]`.
pub fn jacobi_root_series(d: usize, k: usize, m: usize) -> Vec<f64> {
    // (x−1)^{m−k} x^k = Σ_j C(m−k, j) (−1)^{m−k−j} x^{j+k}
    let mut base = vec![0.0; m + 1];
    for j in 0..=m - k {
        let sign = if (m - k - j).is_multiple_of(2) { 1.0 } else { -1.0 };
        base[j + k] = sign * binom((m - k) as u64, j as u64);
    }
    (d..=m)
        .map(|i| base[i] * factorial(i as u64) / factorial((i - d) as u64))
        .collect()
}

pub fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

/// First sign change of `c` scanning right from `lo` in steps of `step`,
/// refined by bisection. `None` if there is none before `hi`.
pub fn first_root_by_scan(c: &[f64], lo: f64, hi: f64, step: f64) -> Option<f64> {
    let mut a = lo;
    let fa0 = horner(c, a);
    if fa0 == 0.0 {
        return Some(a);
    }
    while a < hi {
        let b = a + step;
        let (fa, fb) = (horner(c, a), horner(c, b));
        if fb == 0.0 {
            return Some(b);
        }
        if fa.signum() != fb.signum() {
            let (mut l, mut r) = (a, b);
            for _ in 0..200 {
                let mid = 0.5 * (l + r);
                if horner(c, mid).signum() == fa.signum() {
                    l = mid;
                } else {
                    r = mid;
                }
            }
            return Some(0.5 * (l + r));
        }
        a = b;
    }
    None
}

/// `min{z : Σ 1/(r_i − z) = 1/α}` from the roots, by bisection below the
/// least root.
pub fn amin_from_roots(roots: &[f64], alpha: f64) -> f64 {
    let least = roots.iter().copied().fold(f64::INFINITY, f64::min);
    let phi = |z: f64| roots.iter().map(|r| 1.0 / (r - z)).sum::<f64>();
    let mut lo = least - roots.len() as f64 * alpha - 1.0;
    let mut hi = least;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid >= least || phi(mid) > 1.0 / alpha {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
