//! Exhaustive validators for the expectation identities and interlacing
//! structure. Desk-scale only: every enumeration is capped.

use itertools::Itertools;
use rayon::prelude::*;

use crate::charpoly::{char_poly, check_cap, count_sequences, count_subsets};
use crate::error::{Error, Result};
use crate::expected::lambda_k;
use crate::family::{InterlacingFamily, Mode, WithReplacement, WithoutReplacement};
use crate::matrix::{Matrix, SymmetricMatrix};
use crate::poly::{is_real_rooted, Polynomial, DEFAULT_CUTOFF};
use crate::scalar::Scalar;
use crate::select::certify;

/// Mixing weights tried by [`common_interlacing_check`] unless told otherwise.
pub const DEFAULT_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Comparison tolerance for floating-point oracle checks.
pub const ORACLE_TOLERANCE: f64 = 1e-8;

/// Root accuracy used when comparing `λ_k` values.
const ROOT_EPS: f64 = 1e-11;

/// Index lists visited by an enumeration: all `m^k` sequences, or all
/// `k`-subsets in lexicographic order.
pub fn leaves(m: usize, k: usize, mode: Mode) -> Result<Vec<Vec<usize>>> {
    Ok(match mode {
        Mode::With => {
            check_cap(count_sequences(m, k))?;
            std::iter::repeat_n(0..m, k).multi_cartesian_product().collect()
        }
        Mode::Without => {
            check_cap(count_subsets(m, k))?;
            (0..m).combinations(k).collect()
        }
    })
}

fn mean<T: Scalar>(polys: &[Polynomial<T>]) -> Polynomial<T> {
    let sum = polys.iter().fold(Polynomial::zero(), |acc, p| &acc + p);
    sum.unscale(&T::from_count(polys.len()))
}

/// Average of `det(xI − Σ_{i∈S} u_iu_iᵀ)` over every leaf `S`.
pub fn enumerate_expected<T: Scalar>(b: &Matrix<T>, k: usize, mode: Mode) -> Result<Polynomial<T>> {
    if mode == Mode::Without && k > b.cols() {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds m = {}", b.cols())));
    }
    let leaves = leaves(b.cols(), k, mode)?;
    let polys: Vec<Polynomial<T>> = leaves
        .par_iter()
        .map(|s| SymmetricMatrix::rank_one_sum(b, s).map(|c| char_poly(&c)))
        .collect::<Result<_>>()?;
    Ok(mean(&polys))
}

/// The `k`-subset with the largest `σ_min(B_S)²`, and that value. Ties go to
/// the lexicographically first subset.
pub fn brute_force_best_subset<T: Scalar>(b: &Matrix<T>, k: usize) -> Result<(Vec<usize>, f64)> {
    if k == 0 || k > b.cols() {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= m, got k = {k}")));
    }
    let subsets = leaves(b.cols(), k, Mode::Without)?;
    let values: Vec<f64> = subsets.par_iter().map(|s| certify(b, s)).collect::<Result<_>>()?;
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    Ok((subsets[best].clone(), values[best]))
}

/// True when every convex combination `μ p_i + (1 − μ) p_j` over the grid is
/// real-rooted, for every pair; this implies a common interlacing.
pub fn common_interlacing_check<T: Scalar>(polys: &[Polynomial<T>], grid: &[f64]) -> Result<bool> {
    let Some(first) = polys.first() else {
        return Ok(true);
    };
    for p in polys {
        if p.degree() != first.degree() {
            return Err(Error::InvalidArgument("polynomials must share a degree".into()));
        }
        if !p.leading().is_positive() {
            return Err(Error::InvalidArgument("leading coefficients must be positive".into()));
        }
    }
    if polys.len() == 1 {
        return Ok(is_real_rooted(first, DEFAULT_CUTOFF));
    }
    let pairs: Vec<(usize, usize)> = (0..polys.len()).tuple_combinations().collect();
    Ok(pairs.par_iter().all(|&(i, j)| {
        grid.iter().all(|&mu| {
            let mu = T::from_real(mu);
            let mix = &polys[i].scale(&mu) + &polys[j].scale(&(T::one() - mu));
            is_real_rooted(&mix, DEFAULT_CUTOFF)
        })
    }))
}

/// Outcome of comparing the root's `λ_k` with the leaves'.
#[derive(Clone, Debug, PartialEq)]
pub struct LeafCheck {
    pub root: f64,
    pub leaf_min: f64,
    pub leaf_max: f64,
    pub leaves: usize,
}

impl LeafCheck {
    /// Some leaf is at least the root and some leaf is at most it.
    pub fn passes(&self, tol: f64) -> bool {
        self.leaf_max >= self.root - tol && self.leaf_min <= self.root + tol
    }
}

pub fn leaf_roots<T: Scalar>(b: &Matrix<T>, k: usize, mode: Mode) -> Result<LeafCheck> {
    let family: Box<dyn InterlacingFamily<T>> = match mode {
        Mode::With => Box::new(WithReplacement::new(b, k)?),
        Mode::Without => Box::new(WithoutReplacement::new(b, k)?),
    };
    let root = lambda_k(&family.node(&[])?, k, ROOT_EPS)?;
    let leaves = leaves(b.cols(), k, mode)?;
    let roots: Vec<f64> = leaves
        .par_iter()
        .map(|s| {
            let p = char_poly(&SymmetricMatrix::rank_one_sum(b, s)?);
            lambda_k(&p, k, ROOT_EPS)
        })
        .collect::<Result<_>>()?;
    Ok(LeafCheck {
        root,
        leaf_min: roots.iter().copied().fold(f64::INFINITY, f64::min),
        leaf_max: roots.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        leaves: roots.len(),
    })
}

/// Whether some leaf's `λ_k` is at least the root's and some is at most it.
pub fn kth_root_leaf_check<T: Scalar>(b: &Matrix<T>, k: usize, mode: Mode) -> Result<bool> {
    Ok(leaf_roots(b, k, mode)?.passes(ORACLE_TOLERANCE))
}

/// Internal nodes of a family: every prefix shorter than the depth. Subset
/// families list each set once.
pub fn internal_nodes<T: Scalar, F: InterlacingFamily<T> + ?Sized>(family: &F) -> Result<Vec<Vec<usize>>> {
    let m = family.matrix().cols();
    let mut nodes = Vec::new();
    for t in 0..family.depth() {
        nodes.extend(leaves(m, t, family.mode())?);
    }
    Ok(nodes)
}

/// A node whose polynomial differs from the average of its children.
#[derive(Clone, Debug)]
pub struct AverageMismatch<T> {
    pub node: Vec<usize>,
    pub parent: Polynomial<T>,
    pub children_mean: Polynomial<T>,
}

fn same<T: Scalar>(a: &Polynomial<T>, b: &Polynomial<T>, tol: f64) -> bool {
    if T::EXACT {
        a == b
    } else {
        a.relative_distance(b) <= tol
    }
}

/// Every internal node that is not the weighted average of its children.
pub fn tree_average_check<T: Scalar, F: InterlacingFamily<T> + ?Sized>(
    family: &F,
    tol: f64,
) -> Result<Vec<AverageMismatch<T>>> {
    let nodes = internal_nodes(family)?;
    let checked: Vec<Option<AverageMismatch<T>>> = nodes
        .par_iter()
        .map(|node| {
            let parent = family.node(node)?;
            let kids = children_of(family, node)?;
            let weight = family.child_weight(node);
            let sum = kids.iter().fold(Polynomial::zero(), |acc, p| &acc + p);
            let children_mean = sum.scale(&weight);
            Ok((!same(&parent, &children_mean, tol)).then(|| AverageMismatch {
                node: node.clone(),
                parent,
                children_mean,
            }))
        })
        .collect::<Result<_>>()?;
    Ok(checked.into_iter().flatten().collect())
}

fn children_of<T: Scalar, F: InterlacingFamily<T> + ?Sized>(family: &F, node: &[usize]) -> Result<Vec<Polynomial<T>>> {
    family
        .children(node)
        .into_iter()
        .map(|i| {
            let mut child = node.to_vec();
            child.push(i);
            family.node(&child)
        })
        .collect()
}

/// Internal nodes whose children fail [`common_interlacing_check`].
pub fn sibling_interlacing_check<T: Scalar, F: InterlacingFamily<T> + ?Sized>(
    family: &F,
    grid: &[f64],
) -> Result<Vec<Vec<usize>>> {
    let mut failures = Vec::new();
    for node in internal_nodes(family)? {
        let kids = children_of(family, &node)?;
        if !common_interlacing_check(&kids, grid)? {
            failures.push(node);
        }
    }
    Ok(failures)
}

/// Both sides of the add-one identity for isotropic `B` and a subset `T`:
/// `Σ_{i∉T} p_{T∪{i}}` and `(x−1)^{−(m−d−t−1)} ∂ (x−1)^{m−d−t} p_T`.
pub fn add_one_identity<T: Scalar>(b: &Matrix<T>, subset: &[usize]) -> Result<(Polynomial<T>, Polynomial<T>)> {
    let (d, m) = (b.rows(), b.cols());
    let t = subset.len();
    if t >= m {
        return Err(Error::InvalidArgument(format!("|T| = {t} leaves no column to add")));
    }
    let p = |s: &[usize]| SymmetricMatrix::rank_one_sum(b, s).map(|c| char_poly(&c));
    let mut lhs = Polynomial::zero();
    for i in (0..m).filter(|i| !subset.contains(i)) {
        let mut s = subset.to_vec();
        s.push(i);
        lhs = &lhs + &p(&s)?;
    }
    let one = T::one();
    let factor = |e: usize| Polynomial::linear_factor(one.clone()).pow(e);
    let e = m as isize - d as isize - t as isize;
    let p_t = p(subset)?;
    let lifted = if e >= 0 {
        &p_t * &factor(e as usize)
    } else {
        p_t.div_linear_pow(&one, e.unsigned_abs())?
    };
    let diff = lifted.derivative();
    let rhs = if e >= 1 {
        diff.div_linear_pow(&one, (e - 1) as usize)?
    } else {
        &diff * &factor((1 - e) as usize)
    };
    Ok((lhs, rhs))
}
