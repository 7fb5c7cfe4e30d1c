//! Greedy descent through an interlacing family: at every level keep the
//! child whose `λ_k` is largest.

use rayon::prelude::*;
use serde::Serialize;

use crate::charpoly::{char_poly, stable_rank};
use crate::error::{Error, Result};
use crate::expected::lambda_k;
use crate::family::{InterlacingFamily, Mode, WithReplacement, WithoutReplacement};
use crate::matrix::Matrix;
use crate::poly::smallest_root;
use crate::scalar::Scalar;

/// Slack allowed when comparing `k` against a real-valued rank.
pub const RANK_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceStep {
    pub index: usize,
    pub root: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelectionResult {
    pub indices: Vec<usize>,
    pub sigma_min_sq: f64,
    /// `λ_k` of the root polynomial.
    pub initial_root: f64,
    pub root_trace: Vec<TraceStep>,
    pub mode: Mode,
    pub epsilon: f64,
    pub within_stable_rank: bool,
}

/// Greedy column selection, drawing from all columns at every step.
pub fn select_with_replacement<T: Scalar>(b: &Matrix<T>, k: usize, eps: f64) -> Result<SelectionResult> {
    let family = WithReplacement::new(b, k)?;
    descend(&family, eps)
}

/// Greedy column selection over subsets of an isotropic matrix.
pub fn select_without_replacement<T: Scalar>(b: &Matrix<T>, k: usize, eps: f64) -> Result<SelectionResult> {
    let family = WithoutReplacement::new(b, k)?;
    descend(&family, eps)
}

pub fn select<T: Scalar>(b: &Matrix<T>, k: usize, mode: Mode, eps: f64) -> Result<SelectionResult> {
    match mode {
        Mode::With => select_with_replacement(b, k, eps),
        Mode::Without => select_without_replacement(b, k, eps),
    }
}

/// Walk from the root to a leaf, taking the child with the largest `λ_k`.
/// Columns already chosen are skipped; ties go to the smallest index.
pub fn descend<T: Scalar, F: InterlacingFamily<T>>(family: &F, eps: f64) -> Result<SelectionResult> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {eps}")));
    }
    let b = family.matrix();
    let k = family.depth();
    let srank = stable_rank(b)?;
    let initial_root = lambda_k(&family.node(&[])?, k, eps)?;

    let mut chosen = Vec::with_capacity(k);
    let mut root_trace = Vec::with_capacity(k);
    for _ in 0..k {
        let candidates: Vec<usize> = family
            .children(&chosen)
            .into_iter()
            .filter(|i| !chosen.contains(i))
            .collect();
        let scored: Vec<(usize, f64)> = candidates
            .par_iter()
            .map(|&i| {
                let mut prefix = chosen.clone();
                prefix.push(i);
                let root = lambda_k(&family.node(&prefix)?, k, eps)?;
                Ok((i, root))
            })
            .collect::<Result<_>>()?;
        let (index, root) =
            argmax(&scored).ok_or_else(|| Error::InvalidArgument("no candidate columns remain".into()))?;
        chosen.push(index);
        root_trace.push(TraceStep { index, root });
    }

    Ok(SelectionResult {
        sigma_min_sq: certify(b, &chosen)?,
        indices: chosen,
        initial_root,
        root_trace,
        mode: family.mode(),
        epsilon: eps,
        within_stable_rank: k as f64 <= srank + RANK_SLACK,
    })
}

/// First entry with the strictly largest score.
fn argmax(scored: &[(usize, f64)]) -> Option<(usize, f64)> {
    scored.iter().copied().fold(None, |best, (i, r)| match best {
        Some((_, br)) if r <= br => best,
        _ => Some((i, r)),
    })
}

/// `σ_min(B_S)²`, the least root of the characteristic polynomial of `B_SᵀB_S`.
pub fn certify<T: Scalar>(b: &Matrix<T>, indices: &[usize]) -> Result<f64> {
    for (pos, i) in indices.iter().enumerate() {
        if indices[..pos].contains(i) {
            return Err(Error::DuplicateIndex(*i));
        }
    }
    let sub = b.select_columns(indices)?;
    smallest_root(&char_poly(&sub.gram()), 1e-13)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{jacobi_bound, schatten_bound};
    use crate::expected::jacobi_family_poly;
    use crate::generate::{gaussian_isotropic, gaussian_matrix, rational_isotropic};
    use crate::scalar::Rational;

    #[test]
    fn identity_selects_unit_columns() {
        let b = Matrix::<f64>::identity(4);
        for k in 1..=4 {
            let r = select_with_replacement(&b, k, 1e-9).unwrap();
            assert_eq!(r.indices.len(), k);
            assert!((r.sigma_min_sq - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn rational_isotropic_with_replacement() {
        let b = rational_isotropic(2, 4, 3).unwrap();
        let r = select_with_replacement(&b, 2, 1e-9).unwrap();
        assert!(r.sigma_min_sq >= r.initial_root - 1e-9);
        let mut sorted = r.indices.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 2);
    }

    #[test]
    fn nonisotropic_meets_schatten() {
        for seed in 0..5 {
            let b = gaussian_matrix(3, 6, seed).unwrap();
            let a = b.outer_gram();
            let kap = crate::charpoly::kappa(&a).unwrap();
            for k in 1..=(kap.floor() as usize) {
                let r = select_with_replacement(&b, k, 1e-9).unwrap();
                let bound = schatten_bound(&a, k, 6).unwrap();
                assert!(r.sigma_min_sq >= bound - 1e-9, "seed {seed} k {k}");
            }
        }
    }

    #[test]
    fn without_replacement_square_takes_everything() {
        let b = Matrix::<f64>::identity(3);
        let r = select_without_replacement(&b, 3, 1e-9).unwrap();
        let mut idx = r.indices.clone();
        idx.sort();
        assert_eq!(idx, vec![0, 1, 2]);
        assert!((r.sigma_min_sq - 1.0).abs() < 1e-9);
    }

    #[test]
    fn without_replacement_meets_jacobi() {
        for seed in 0..5 {
            let b = gaussian_isotropic(3, 6, seed).unwrap();
            let r = select_without_replacement(&b, 2, 1e-9).unwrap();
            let bound = jacobi_bound(3, 2, 6).unwrap();
            assert!((bound - (12f64.sqrt() - 6f64.sqrt()).powi(2) / 36.0).abs() < 1e-15);
            assert!(r.sigma_min_sq >= bound - 1e-9);
            let f = jacobi_family_poly(&b, &[], 2).unwrap();
            assert!(r.sigma_min_sq >= lambda_k(&f, 2, 1e-9).unwrap() - 1e-9);
        }
    }

    #[test]
    fn trace_is_monotone() {
        let b = gaussian_isotropic(4, 8, 9).unwrap();
        for mode in [Mode::With, Mode::Without] {
            let r = select(&b, 3, mode, 1e-9).unwrap();
            let mut prev = r.initial_root;
            for step in &r.root_trace {
                assert!(step.root >= prev - 1e-9);
                prev = step.root;
            }
            assert!(r.sigma_min_sq >= prev - 1e-9);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let b = Matrix::<f64>::identity(2);
        assert!(select_with_replacement(&b, 3, 1e-9).is_err());
        assert!(select_with_replacement(&b, 1, 0.0).is_err());
        let skew = Matrix::from_rows(vec![vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(
            select_without_replacement(&skew, 1, 1e-9),
            Err(Error::NotIsotropic(_))
        ));
    }

    #[test]
    fn certify_examples() {
        let b = Matrix::from_rows(vec![vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]]).unwrap();
        assert!((certify(&b, &[0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((certify(&b, &[0, 1]).unwrap() - 1.0).abs() < 1e-12);
        assert!(certify(&b, &[0, 2]).unwrap().abs() < 1e-12);
        assert!(matches!(certify(&b, &[1, 1]), Err(Error::DuplicateIndex(1))));
        let q = Matrix::<Rational>::identity(2);
        assert!((certify(&q, &[0, 1]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn argmax_prefers_first_on_ties() {
        assert_eq!(argmax(&[(3, 0.5), (1, 0.7), (0, 0.7)]), Some((1, 0.7)));
        assert_eq!(argmax(&[]), None);
    }
}
