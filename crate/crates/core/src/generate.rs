//! Seeded test instances: Gaussian matrices, their isotropic normalization,
//! and exactly isotropic rational matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::charpoly::{char_poly, eigenvalues};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, RationalMatrix, RealMatrix, SymmetricMatrix};
use crate::poly::Polynomial;
use crate::scalar::Rational;

/// Target for `‖BBᵀ − I‖∞` after normalization.
pub const ISOTROPY_TARGET: f64 = 1e-13;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `d × m` matrix with i.i.d. standard normal entries.
pub fn gaussian_matrix(d: usize, m: usize, seed: u64) -> Result<RealMatrix> {
    let mut rng = rng(seed);
    let data = (0..d * m).map(|_| rng.sample(StandardNormal)).collect();
    Matrix::new(d, m, data)
}

/// `(BBᵀ)^{−1/2} B`, so that the rows become orthonormal.
pub fn isotropize(b: &RealMatrix) -> Result<RealMatrix> {
    let s = b.outer_gram();
    let root = inverse_sqrt(&s)?;
    let mut out = root.as_matrix() * b;
    for _ in 0..10 {
        let defect = out.isotropy_defect();
        if defect <= ISOTROPY_TARGET {
            return Ok(out);
        }
        // (I + E)^{−1/2} ≈ I − E/2 + 3E²/8 − 5E³/16
        let e = out.outer_gram().as_matrix() - &Matrix::identity(b.rows());
        let e2 = &e * &e;
        let e3 = &e2 * &e;
        let corr = &(&(&Matrix::identity(b.rows()) - &e.scale(&0.5)) + &e2.scale(&0.375)) - &e3.scale(&0.3125);
        out = &corr * &out;
    }
    let defect = out.isotropy_defect();
    if defect <= 1e-10 {
        Ok(out)
    } else {
        Err(Error::NotIsotropic(defect))
    }
}

/// `S^{−1/2}` for positive definite `S`, by Sylvester's formula over the
/// distinct eigenvalues of `S`.
pub fn inverse_sqrt(s: &SymmetricMatrix) -> Result<SymmetricMatrix> {
    let n = s.dim();
    let scale = s.trace() / n as f64;
    if scale <= 0.0 {
        return Err(Error::Singular);
    }
    let eigs = eigenvalues(s)?;
    if eigs.len() != n || eigs[0] <= 1e-12 * scale {
        return Err(Error::Singular);
    }
    let mut clusters: Vec<f64> = Vec::new();
    for l in eigs {
        match clusters.last() {
            Some(&prev) if (l - prev).abs() <= 1e-8 * scale => {}
            _ => clusters.push(l),
        }
    }
    let a = s.as_matrix();
    let mut out = Matrix::zeros(n, n);
    for (i, &li) in clusters.iter().enumerate() {
        let mut term = Matrix::identity(n).scale(&(1.0 / li.sqrt()));
        for (j, &lj) in clusters.iter().enumerate() {
            if i != j {
                let factor = (a - &Matrix::identity(n).scale(&lj)).scale(&(1.0 / (li - lj)));
                term = &term * &factor;
            }
        }
        out = &out + &term;
    }
    SymmetricMatrix::new(out)
}

/// Gaussian `d × m` matrix normalized so that `BBᵀ = I`.
pub fn gaussian_isotropic(d: usize, m: usize, seed: u64) -> Result<RealMatrix> {
    if m < d {
        return Err(Error::Dimension(format!("isotropic needs m >= d, got d={d} m={m}")));
    }
    isotropize(&gaussian_matrix(d, m, seed)?)
}

/// Entries `p/q` with `|p| ≤ 6` and `1 ≤ q ≤ 4`.
pub fn random_rational_matrix(d: usize, m: usize, seed: u64) -> Result<RationalMatrix> {
    let mut rng = rng(seed);
    let data = (0..d * m)
        .map(|_| {
            let p: i64 = rng.random_range(-6..=6);
            let q: i64 = rng.random_range(1..=4);
            Rational::new(p.into(), q.into())
        })
        .collect();
    Matrix::new(d, m, data)
}

/// The first `d` rows of the Cayley transform `(I − S)(I + S)^{−1}` of a
/// random rational skew-symmetric `S`: an exactly isotropic `d × m` matrix.
pub fn rational_isotropic(d: usize, m: usize, seed: u64) -> Result<RationalMatrix> {
    if m < d {
        return Err(Error::Dimension(format!("isotropic needs m >= d, got d={d} m={m}")));
    }
    let mut rng = rng(seed);
    let mut s = Matrix::<Rational>::zeros(m, m);
    for i in 0..m {
        for j in i + 1..m {
            let p: i64 = rng.random_range(-3..=3);
            let q: i64 = rng.random_range(1..=3);
            let v = Rational::new(p.into(), q.into());
            s.set(i, j, v.clone());
            s.set(j, i, -v);
        }
    }
    let id = Matrix::identity(m);
    // I + S is invertible for skew S.
    let q = &(&id - &s) * &(&id + &s).inverse()?;
    let rows = (0..d).map(|i| q.row(i).to_vec()).collect();
    Matrix::from_rows(rows)
}

/// Monic polynomial with `degree` roots drawn from the multiples of 1/8 in
/// `[-5, 5]`, so the expanded coefficients are exact in `f64`. Each root is
/// repeated with probability 1/5 to exercise multiplicities.
pub fn random_real_rooted(rng: &mut impl Rng, degree: usize) -> (Polynomial, Vec<f64>) {
    let mut roots: Vec<f64> = Vec::with_capacity(degree);
    while roots.len() < degree {
        let r = match roots.last() {
            Some(&prev) if rng.random_bool(0.2) => prev,
            _ => rng.random_range(-40i32..=40) as f64 / 8.0,
        };
        roots.push(r);
    }
    roots.sort_by(f64::total_cmp);
    (Polynomial::from_roots(&roots), roots)
}

/// Characteristic polynomial roots of `BBᵀ`, for diagnostics.
pub fn outer_spectrum(b: &RealMatrix) -> Result<Vec<f64>> {
    crate::poly::real_roots(&char_poly(&b.outer_gram()), 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{Signed, Zero};

    #[test]
    fn gaussian_is_deterministic() {
        assert_eq!(gaussian_matrix(3, 5, 7).unwrap(), gaussian_matrix(3, 5, 7).unwrap());
        assert_ne!(gaussian_matrix(3, 5, 7).unwrap(), gaussian_matrix(3, 5, 8).unwrap());
    }

    #[test]
    fn isotropic_normalization() {
        for (d, m) in [(2, 2), (3, 6), (4, 8), (6, 12)] {
            for seed in 0..5 {
                let b = gaussian_isotropic(d, m, seed).unwrap();
                assert!(b.isotropy_defect() <= 1e-10, "d={d} m={m} seed={seed}");
            }
        }
    }

    #[test]
    fn square_case_is_orthogonal() {
        let b = gaussian_isotropic(2, 2, 3).unwrap();
        let g = b.gram();
        assert!((g.as_matrix() - &Matrix::identity(2)).max_abs() <= 1e-10);
    }

    #[test]
    fn inverse_sqrt_of_diagonal() {
        let s = SymmetricMatrix::diagonal(&[4.0, 1.0, 0.25]);
        let r = inverse_sqrt(&s).unwrap();
        let expect = SymmetricMatrix::diagonal(&[0.5, 1.0, 2.0]);
        assert!((r.as_matrix() - expect.as_matrix()).max_abs() < 1e-9);
        assert!(inverse_sqrt(&SymmetricMatrix::diagonal(&[1.0, 0.0])).is_err());
    }

    #[test]
    fn cayley_instances_are_exactly_isotropic() {
        for (d, m) in [(1, 3), (2, 4), (3, 6)] {
            let b = rational_isotropic(d, m, 5).unwrap();
            assert!(b.isotropy_defect().is_zero());
        }
    }

    #[test]
    fn rational_entries_in_range() {
        let b = random_rational_matrix(3, 4, 1).unwrap();
        assert!(b.data().iter().all(|v| v.abs() <= Rational::from_integer(6.into())));
        assert!(b.data().iter().all(|v| v.denom() <= &num_bigint::BigInt::from(4)));
    }
}
