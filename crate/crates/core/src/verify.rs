//! Built-in identity and inequality suites run by `interlace verify`.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::Rng;

use crate::bounds::{
    alpha_star, improved_jacobi_bound, jacobi_bound, krasikov_bound, schatten_bound, ss_bound, u_alpha,
};
use crate::charpoly::{bivariate_det, cauchy_binet_check, char_poly, stable_rank, stable_rank4};
use crate::error::{Error, Result};
use crate::expected::{
    associated_laguerre, conditional_expected, jacobi_family_poly, jacobi_root_poly, laguerre_operator_poly, lambda_k,
    nonisotropic_expected_from_matrix,
};
use crate::family::{Mode, WithReplacement, WithoutReplacement};
use crate::generate::{
    gaussian_isotropic, gaussian_matrix, random_rational_matrix, random_real_rooted, rational_isotropic, rng,
};
use crate::matrix::SymmetricMatrix;
use crate::oracle::{
    add_one_identity, brute_force_best_subset, enumerate_expected, leaf_roots, leaves, sibling_interlacing_check,
    tree_average_check, DEFAULT_GRID, ORACLE_TOLERANCE,
};
use crate::poly::{
    alpha_min, is_real_rooted, kth_largest_root, one_minus_lambda_deriv, smallest_root, sturm_root_count, Polynomial,
    DEFAULT_CUTOFF, DEFAULT_EPSILON,
};
use crate::scalar::{factorial, Rational};
use crate::select::{select_with_replacement, select_without_replacement};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            other => Err(Error::InvalidArgument(format!(
                "unknown level {other:?}; use quick or full"
            ))),
        }
    }
}

impl Level {
    fn pick<T>(self, quick: T, full: T) -> T {
        match self {
            Level::Quick => quick,
            Level::Full => full,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub elapsed: Duration,
    /// Each failing case, with both sides of the identity.
    pub failures: Vec<String>,
}

impl CheckOutcome {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            elapsed: Duration::ZERO,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(detail());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "ok" } else { "FAIL" };
        write!(
            f,
            "{status:<4} {:<28} {:>5} cases {:>8.2}s",
            self.name,
            self.cases,
            self.elapsed.as_secs_f64()
        )?;
        for line in self.failures.iter().take(5) {
            write!(f, "\n       {line}")?;
        }
        if self.failures.len() > 5 {
            write!(f, "\n       ... {} more", self.failures.len() - 5)?;
        }
        Ok(())
    }
}

type Check = fn(Level) -> Result<CheckOutcome>;

const CHECKS: &[Check] = &[
    laguerre_identity,
    expected_with_replacement,
    expected_without_replacement,
    product_form,
    family_trees,
    add_one,
    bivariate_specialization,
    cauchy_binet,
    rank_inequalities,
    sturm_consistency,
    barrier_lemmas,
    zero_bounds,
    selection_guarantees,
    greedy_vs_brute_force,
];

/// Run every suite at the given level.
pub fn run_suite(level: Level) -> Result<Vec<CheckOutcome>> {
    CHECKS
        .iter()
        .map(|check| {
            let start = Instant::now();
            let mut outcome = check(level)?;
            outcome.elapsed = start.elapsed();
            Ok(outcome)
        })
        .collect()
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn laguerre_identity(level: Level) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("laguerre_identity");
    let (max_d, max_m) = level.pick((5, 6), (8, 12));
    for d in 1..=max_d {
        for k in 0..=d {
            for m in 1..=max_m {
                let lhs = laguerre_operator_poly::<Rational>(d, k, m)?.div_x_pow(d - k)?;
                let mut c = factorial::<Rational>(k) / num_traits::pow(q(m as i64), k);
                if k % 2 == 1 {
                    c = -c;
                }
                let rhs = associated_laguerre::<Rational>(k, d - k)?
                    .compose_affine(&q(m as i64), &q(0))
                    .scale(&c);
                out.record(lhs == rhs, || format!("d={d} k={k} m={m}: {lhs} vs {rhs}"));
            }
        }
    }
    Ok(out)
}

fn expected_with_replacement(level: Level) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("expected_with_replacement");
    let seeds = level.pick(1, 3);
    for m in 1..=4 {
        for d in 1..=3 {
            for seed in 0..seeds {
                let b = random_rational_matrix(d, m, 100 * seed + (10 * m + d) as u64)?;
                for k in 0..=d {
                    for j in 0..=k {
                        let prefix: Vec<usize> = (0..j).map(|i| (i * 7 + seed as usize) % m).collect();
                        let lhs = conditional_expected(&b, &prefix, k)?;
                        let completions = leaves(m, k - j, Mode::With)?;
                        let polys: Vec<Polynomial<Rational>> = completions
                            .iter()
                            .map(|tail| {
                                let s: Vec<usize> = prefix.iter().chain(tail).copied().collect();
                                SymmetricMatrix::rank_one_sum(&b, &s).map(|c| char_poly(&c))
                            })
                            .collect::<Result<_>>()?;
                        let sum = polys.iter().fold(Polynomial::zero(), |a, p| &a + p);
                        let rhs = sum.unscale(&Rational::from_integer(polys.len().into()));
                        out.record(lhs == rhs, || {
                            format!("m={m} d={d} k={k} prefix={prefix:?}: {lhs} vs {rhs}")
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

fn expected_without_replacement(level: Level) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("expected_without_replacement");
    let max_m = level.pick(5, 6);
    for m in 1..=max_m {
        for d in 1..=m.min(3) {
            let b = rational_isotropic(d, m, (10 * m + d) as u64)?;
            for k in 0..=d {
                let lhs = jacobi_family_poly(&b, &[], k)?;
                let rhs = enumerate_expected(&b, k, Mode::Without)?;
                out.record(lhs == rhs, || format!("m={m} d={d} k={k}: {lhs} vs {rhs}"));
            }
        }
    }
    Ok(out)
}

fn product_form(level: Level) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("product_form");
    let seeds = level.pick(2, 6);
    for seed in 0..seeds {
        for (d, m) in [(1, 3), (2, 3), (2, 4), (3, 4)] {
            let b = random_rational_matrix(d, m, seed + 50)?;
            let mm = b.outer_gram().scale(&(Rational::from_integer(1.into()) / q(m as i64)));
            for k in 0..=d {
                let lhs = enumerate_expected(&b, k, Mode::With)?;
                let rhs = nonisotropic_expected_from_matrix(&mm, k)?;
                out.record(lhs == rhs, || format!("d={d} m={m} k={k}: {lhs} vs {rhs}"));
            }
        }
    }
    Ok(out)
}

fn family_trees(level: Level) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("family_trees");
    let max_m = level.pick(4, 5);
    for m in 2..=max_m {
        for d in 1..=m {
            let b = rational_isotropic(d, m, (7 * m + d) as u64)?;
            for k in 1..=d.min(3) {
                let fam = WithoutReplacement::new(&b, k)?;
                let avg = tree_average_check(&fam, 0.0)?;
                out.record(avg.is_empty(), || {
                    let a = &avg[0];
                    format!(
                        "m={m} d={d} k={k} node {:?}: {} vs {}",
                        a.node, a.parent, a.children_mean
                    )
                });
                let sib = sibling_interlacing_check(&fam, &DEFAULT_GRID)?;
                out.record(sib.is_empty(), || {
                    format!("m={m} d={d} k={k}: siblings of {sib:?} not interlacing")
                });
                let leaf = leaf_roots(&b, k, Mode::Without)?;
                out.record(leaf.passes(ORACLE_TOLERANCE), || format!("m={m} d={d} k={k}: {leaf:?}"));
            }
        }
    }
    for (d, m) in [(1, 2), (2, 3), (2, 4)] {
        let b = rational_isotropic(d, m, 3)?;
        for k in 1..=d {
            let fam = WithReplacement::new(&b, k)?;
            let avg = tree_average_check(&fam, 0.0)?;
            out.record(avg.is_empty(), || format!("with d={d} m={m} k={k}: average mismatch"));
            let leaf = leaf_roots(&b, k, Mode::With)?;
            out.record(leaf.passes(ORACLE_TOLERANCE), || {
                format!("with d={d} m={m} k={k}: {leaf:?}")
            });
        }
    }
    Ok(out)
}

fn add_one(level: Level) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("add_one_identity");
    let max_m = level.pick(4, 6);
    for m in 2..=max_m {
        for d in 1..=m.min(3) {
            let b = rational_isotropic(d, m, (3 * m + d) as u64)?;
            for t in 0..m.min(3) {
                for subset in (0..m).combinations(t) {
                    let (lhs, rhs) = add_one_identity(&b, &subset)?;
                    out.record(lhs == rhs, || format!("m={m} d={d} T={subset:?}: {lhs} vs {rhs}"));
                }
            }
        }
    }
    Ok(out)
}

fn bivariate_specialization(level: Level) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("bivariate_specialization");
    let mut r = rng(17);
    for trial in 0..level.pick(5, 20) {
        let d = 1 + trial % 5;
        let g = gaussian_matrix(d, d + 2, 900 + trial as u64)?;
        let h = gaussian_matrix(d, d + 1, 1900 + trial as u64)?;
        let c = g.outer_gram();
        let m = h.outer_gram();
        let biv = bivariate_det(&c, &m)?;
        for _ in 0..10 {
            let t: f64 = r.random_range(-2.0..2.0);
            let lhs = biv.at_t(&t);
            let rhs = char_poly(&c.sub_scaled(&m, &t)?);
            let dist = lhs.relative_distance(&rhs);
            out.record(dist <= ORACLE_TOLERANCE, || format!("d={d} t={t}: {lhs} vs {rhs}"));
        }
    }
    Ok(out)
}

fn cauchy_binet(level: Level) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("cauchy_binet");
    for seed in 0..level.pick(3, 10) {
        let b = gaussian_matrix(3, 5, 300 + seed)?;
        for l in 0..=3 {
            let (lhs, rhs) = cauchy_binet_check(&b, l)?;
            let ok = (lhs - rhs).abs() <= ORACLE_TOLERANCE * lhs.abs().max(rhs.abs()).max(1.0);
            out.record(ok, || format!("seed={seed} l={l}: {lhs} vs {rhs}"));
        }
    }
    Ok(out)
}

fn rank_inequalities(level: Level) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("rank_inequalities");
    for seed in 0..level.pick(5, 20) {
        let d = 2 + (seed as usize) % 3;
        let b = gaussian_matrix(d, 2 * d + 1, 400 + seed)?;
        let (s2, s4) = (stable_rank(&b)?, stable_rank4(&b)?);
        out.record(s4 >= s2 - 1e-9, || format!("seed={seed}: srank4 {s4} vs srank {s2}"));
        let k = 1;
        let ss = ss_bound(&b, k)?;
        let sc = schatten_bound(&b.outer_gram(), k, b.cols())?;
        out.record(sc >= ss - 1e-12, || format!("seed={seed}: schatten {sc} vs ss {ss}"));
    }
    Ok(out)
}

fn sturm_consistency(level: Level) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("sturm_consistency");
    let mut r = rng(23);
    for _ in 0..level.pick(30, 100) {
        let degree = r.random_range(1..=8);
        let (p, _) = random_real_rooted(&mut r, degree);
        let mut cuts = [
            r.random_range(-6.0..6.0),
            r.random_range(-6.0..6.0),
            r.random_range(-6.0..6.0),
        ];
        cuts.sort_by(f64::total_cmp);
        let [a, b, c] = cuts;
        if a < b && b < c {
            let split = sturm_root_count(&p, a, b)? + sturm_root_count(&p, b, c)?;
            let whole = sturm_root_count(&p, a, c)?;
            out.record(split == whole, || format!("{p} on ({a}, {b}, {c}): {split} vs {whole}"));
        }
        let lo = smallest_root(&p, DEFAULT_EPSILON)?;
        let kth = kth_largest_root(&p, degree, DEFAULT_EPSILON)?;
        out.record((lo - kth).abs() <= 2.0 * DEFAULT_EPSILON, || {
            format!("{p}: {lo} vs {kth}")
        });
    }
    Ok(out)
}

fn barrier_lemmas(level: Level) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("barrier_lemmas");
    let tol = ORACLE_TOLERANCE;
    let eps = 1e-11;
    let grid = [0.05, 0.3, 1.0, 2.5];
    let mut r = rng(29);
    for _ in 0..level.pick(30, 100) {
        let degree = r.random_range(1..=8);
        let (p, roots) = random_real_rooted(&mut r, degree);
        let lmin = roots[0];
        for &alpha in &grid {
            let base = alpha_min(&p, &alpha, eps)?;
            out.record(base + alpha <= lmin + tol, || {
                format!("{p}, α={alpha}: amin+α = {} vs λmin = {lmin}", base + alpha)
            });
            for &lambda in &grid {
                let shifted = one_minus_lambda_deriv(&p, &lambda);
                let real = is_real_rooted(&shifted, DEFAULT_CUTOFF);
                let lhs = alpha_min(&shifted, &alpha, eps)?;
                let rhs = base + 1.0 / (1.0 / lambda + 1.0 / alpha);
                out.record(real && lhs >= rhs - tol, || {
                    format!("{p}, α={alpha}, λ={lambda}: {lhs} vs {rhs}")
                });
            }
            if degree >= 2 {
                let lhs = alpha_min(&p.derivative(), &alpha, eps)?;
                out.record(lhs >= base + alpha - tol, || {
                    format!("{p}', α={alpha}: {lhs} vs {}", base + alpha)
                });
            }
        }
    }
    Ok(out)
}

fn zero_bounds(level: Level) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("zero_bounds");
    let tol = ORACLE_TOLERANCE;
    let max_d = level.pick(6, 10);
    for d in 2..=max_d {
        for k in 1..d {
            let lag = smallest_root(&associated_laguerre::<Rational>(k, d - k)?, 1e-12)?;
            let kb = krasikov_bound(k, (d - k) as f64)?;
            out.record(kb <= lag + tol, || {
                format!("k={k} α={}: krasikov {kb} vs root {lag}", d - k)
            });
            let floor = (d as f64).sqrt() - (k as f64).sqrt();
            out.record(kb > floor * floor, || {
                format!("k={k} d={d}: krasikov {kb} vs {}", floor * floor)
            });
            for m in 10.max(d)..=14 {
                let jb = jacobi_bound(d, k, m)?;
                let (d_f, k_f, m_f) = (d as f64, k as f64, m as f64);
                let weaker = (1.0 + (d_f * k_f).sqrt() / m_f) * (1.0 - (k_f / d_f).sqrt()).powi(2) * d_f / m_f;
                out.record(jb >= weaker - 1e-12, || {
                    format!("({m},{d},{k}): jacobi {jb} vs {weaker}")
                });
                if d == m {
                    continue;
                }
                let a = alpha_star(m, d, k)?;
                let u = u_alpha(a, m, d, k);
                out.record(a > 0.0 && (u - jb).abs() <= tol, || {
                    format!("({m},{d},{k}): u(α*) {u} vs {jb}")
                });
                let root = smallest_root(&jacobi_root_poly::<Rational>(d, k, m)?, 1e-12)?;
                out.record(jb <= root + tol, || {
                    format!("({m},{d},{k}): jacobi {jb} vs root {root}")
                });
                let ib = improved_jacobi_bound(d, k, m)?;
                out.record(ib <= root + tol, || {
                    format!("({m},{d},{k}): improved {ib} vs root {root}")
                });
            }
        }
    }
    Ok(out)
}

fn selection_guarantees(level: Level) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("selection_guarantees");
    let eps = DEFAULT_EPSILON;
    let seeds = level.pick(3, 20);
    for (d, m) in [(4usize, 8usize), (6, 12)] {
        for seed in 0..seeds {
            let b = gaussian_isotropic(d, m, seed)?;
            for k in 1..d {
                let with = select_with_replacement(&b, k, eps)?;
                let bound = ((d as f64).sqrt() - (k as f64).sqrt()).powi(2) / m as f64;
                out.record(with.sigma_min_sq >= bound - 1e-7, || {
                    format!("with ({d},{m},{k}) seed {seed}: {} vs {bound}", with.sigma_min_sq)
                });
                out.record(with.sigma_min_sq >= with.initial_root - eps, || {
                    format!(
                        "with ({d},{m},{k}) seed {seed}: {} vs root {}",
                        with.sigma_min_sq, with.initial_root
                    )
                });
                let without = select_without_replacement(&b, k, eps)?;
                let jb = jacobi_bound(d, k, m)?;
                out.record(without.sigma_min_sq >= jb - 1e-7, || {
                    format!("without ({d},{m},{k}) seed {seed}: {} vs {jb}", without.sigma_min_sq)
                });
            }
        }
    }
    for seed in 0..seeds {
        let d = 2 + (seed as usize) % 3;
        let m = 2 * d;
        let b = gaussian_matrix(d, m, 700 + seed)?;
        let a = b.outer_gram();
        let kap = crate::charpoly::kappa(&a)?;
        for k in 1..=(kap.floor() as usize).min(d) {
            let r = select_with_replacement(&b, k, eps)?;
            let sb = schatten_bound(&a, k, m)?;
            out.record(r.sigma_min_sq >= sb - 1e-7, || {
                format!("nonisotropic seed {seed} k={k}: {} vs {sb}", r.sigma_min_sq)
            });
        }
    }
    Ok(out)
}

fn greedy_vs_brute_force(level: Level) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("greedy_vs_brute_force");
    let eps = DEFAULT_EPSILON;
    for seed in 0..level.pick(3, 10) {
        for (d, m, k) in [(2usize, 4usize, 2usize), (3, 6, 2), (3, 7, 3), (4, 8, 2)] {
            let b = gaussian_matrix(d, m, 1000 + seed)?;
            let (_, best) = brute_force_best_subset(&b, k)?;
            let r = select_with_replacement(&b, k, eps)?;
            let root = lambda_k(&conditional_expected(&b, &[], k)?, k, eps)?;
            out.record(r.sigma_min_sq <= best + 1e-9 && r.sigma_min_sq >= root - eps, || {
                format!(
                    "({d},{m},{k}) seed {seed}: greedy {} best {best} root {root}",
                    r.sigma_min_sq
                )
            });
        }
    }
    Ok(out)
}
