//! Real root counting and location.
//!
//! Distinct roots are counted with Sturm sequences and multiplicities with the
//! chain of repeated gcds `g_0 = p, g_{i+1} = gcd(g_i, g_i')`: the distinct real
//! roots of `g_i` are exactly the real roots of `p` with multiplicity greater
//! than `i`. Chains are built in rational arithmetic on the stored
//! coefficients. For floating point input whose exact chains miss roots, they
//! are rebuilt with each new element rounded back to double precision, and a
//! remainder whose coefficients fall below `cutoff` times the dividend's
//! largest coefficient is treated as zero.
//!
//! When rounding hides a multiple root from the gcd chain, ordered roots are
//! located instead by bisection on the Budan–Fourier count, the sign
//! variations of `p, p', …, p⁽ⁿ⁾`, which is exact for real-rooted `p` and needs
//! no gcds. All signs are exact for the stored coefficients.

use std::marker::PhantomData;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use num_traits::{Signed, Zero};

use crate::scalar::{Rational, Scalar};

use super::Polynomial;

/// Default half-width for all root searches.
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Default relative coefficient cutoff used while building gcd chains.
pub const DEFAULT_CUTOFF: f64 = 1e-12;

/// A half-open interval `(lo, hi]` holding `count` distinct real roots.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootInterval {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl RootInterval {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Sign of a polynomial at a double, exact for the stored coefficients.
/// Horner runs in floating point with a running error bound and falls back to
/// rational arithmetic only when the result is too small to trust.
#[derive(Clone, Debug)]
struct SignEval {
    approx: Vec<f64>,
    exact: Polynomial<Rational>,
}

impl SignEval {
    fn new(exact: Polynomial<Rational>) -> Self {
        Self {
            approx: exact.coeffs().iter().map(|c| c.to_real()).collect(),
            exact,
        }
    }

    /// `-1`, `0` or `1`.
    fn sign(&self, x: f64) -> i8 {
        let mut value = 0.0f64;
        let mut magnitude = 0.0f64;
        for c in self.approx.iter().rev() {
            value = value * x + c;
            magnitude = magnitude * x.abs() + c.abs();
        }
        // covers coefficient rounding plus two roundings per Horner step
        let slack = (4 * self.approx.len() + 4) as f64 * f64::EPSILON * magnitude + f64::MIN_POSITIVE;
        if value.is_finite() && slack.is_finite() && value.abs() > slack {
            return if value > 0.0 { 1 } else { -1 };
        }
        let v = self.exact.eval(&x.to_rational());
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }
}

/// Sign variations of a polynomial sequence at `x`, skipping zeros.
fn variations(seq: &[SignEval], x: f64) -> usize {
    let mut changes = 0;
    let mut last = 0i8;
    for p in seq {
        let s = p.sign(x);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

#[derive(Clone, Debug)]
struct SturmChain {
    chain: Vec<SignEval>,
}

impl SturmChain {
    fn sign_changes(&self, x: f64) -> usize {
        variations(&self.chain, x)
    }

    /// Distinct roots in `(lo, hi]`.
    fn count(&self, lo: f64, hi: f64) -> usize {
        self.sign_changes(lo).saturating_sub(self.sign_changes(hi))
    }

    fn new(chain: Vec<Polynomial<Rational>>) -> Self {
        Self {
            chain: chain.into_iter().map(SignEval::new).collect(),
        }
    }
}

/// Rational chain construction, rounding to doubles when `approximate`.
#[derive(Clone, Copy, Debug)]
struct ChainBuilder {
    cutoff: f64,
    approximate: bool,
}

impl ChainBuilder {
    fn negligible(&self, c: &Rational, scale: f64) -> bool {
        if self.approximate {
            c.abs().to_real() <= self.cutoff * scale
        } else {
            c.is_zero()
        }
    }

    /// Unit-normalize, then round to double precision if approximate.
    fn settle(&self, p: Polynomial<Rational>) -> Polynomial<Rational> {
        let scale = p.norm_inf();
        let p = if scale.is_zero() { p } else { p.unscale(&scale) };
        if self.approximate {
            p.map(|c| c.to_real().to_rational())
        } else {
            p
        }
    }

    /// Drop negligible leading coefficients; zero if nothing remains.
    fn clean_top(&self, p: Polynomial<Rational>, scale: f64) -> Polynomial<Rational> {
        let mut coeffs = p.into_coeffs();
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| self.negligible(c, scale)) {
            coeffs.pop();
        }
        if coeffs.len() == 1 && self.negligible(&coeffs[0], scale) {
            return Polynomial::zero();
        }
        Polynomial::new(coeffs)
    }

    /// `p, p', -rem(p, p'), ...` ending at (a scalar multiple of) `gcd(p, p')`.
    fn remainder_sequence(&self, p: &Polynomial<Rational>) -> Vec<Polynomial<Rational>> {
        let p0 = self.settle(p.clone());
        let d = self.clean_top(p0.derivative(), p0.norm_inf().to_real());
        let mut seq = vec![p0];
        if d.is_zero() {
            return seq;
        }
        seq.push(self.settle(d));
        loop {
            let n = seq.len();
            let (a, b) = (&seq[n - 2], &seq[n - 1]);
            if b.degree() == 0 {
                break;
            }
            let (_, r) = a.div_rem(b);
            let r = self.clean_top(-&r, a.norm_inf().to_real());
            if r.is_zero() {
                break;
            }
            seq.push(self.settle(r));
        }
        seq
    }

    /// Sturm chains of the squarefree parts of each repeated-gcd layer.
    fn layers(&self, p: &Polynomial<Rational>) -> Vec<Vec<Polynomial<Rational>>> {
        let mut layers = Vec::new();
        let mut current = p.clone();
        loop {
            let seq = self.remainder_sequence(&current);
            let gcd = seq.last().expect("sequence is never empty").clone();
            if gcd.degree() == 0 {
                layers.push(seq);
                break;
            }
            let (squarefree, _) = current.div_rem(&gcd);
            layers.push(self.remainder_sequence(&squarefree));
            current = self.settle(gcd);
        }
        layers
    }
}

/// Root counting and location for one polynomial. Sturm layers are built on
/// first use.
#[derive(Debug)]
pub struct RootFinder<T = f64> {
    degree: usize,
    bound: f64,
    exact: Polynomial<Rational>,
    builder: ChainBuilder,
    fourier: Vec<SignEval>,
    layers: OnceLock<Vec<SturmChain>>,
    _scalar: PhantomData<T>,
}

impl<T: Scalar> RootFinder<T> {
    pub fn new(p: &Polynomial<T>) -> Result<Self> {
        Self::with_cutoff(p, DEFAULT_CUTOFF)
    }

    pub fn with_cutoff(p: &Polynomial<T>, cutoff: f64) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if p.coeffs().iter().any(|c| !c.to_real().is_finite()) {
            return Err(Error::InvalidArgument("polynomial has non-finite coefficients".into()));
        }
        let degree = p.degree();
        let exact = p.map(|c| c.to_rational());
        let mut fourier = Vec::with_capacity(degree + 1);
        let mut current = exact.clone();
        for _ in 0..=degree {
            let next = current.derivative();
            fourier.push(SignEval::new(current));
            current = next;
        }
        Ok(Self {
            degree,
            bound: cauchy_bound(p),
            exact,
            builder: ChainBuilder {
                cutoff,
                approximate: !T::EXACT,
            },
            fourier,
            layers: OnceLock::new(),
            _scalar: PhantomData,
        })
    }

    /// Exact layers of the stored coefficients. For floating point input
    /// they are replaced by rounded layers when they miss roots, since
    /// noise can split a multiple root into a complex pair.
    fn layers(&self) -> &[SturmChain] {
        self.layers.get_or_init(|| {
            let build = |builder: ChainBuilder| -> Vec<SturmChain> {
                builder.layers(&self.exact).into_iter().map(SturmChain::new).collect()
            };
            let exact = build(ChainBuilder {
                approximate: false,
                ..self.builder
            });
            if !self.builder.approximate || full_count(&exact, self.bound) == self.degree {
                return exact;
            }
            build(self.builder)
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Strict bound on the magnitude of every root.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// Distinct real roots in `(lo, hi]`.
    pub fn count_distinct(&self, lo: f64, hi: f64) -> usize {
        self.layers()[0].count(lo, hi)
    }

    /// Real roots in `(lo, hi]` counted with multiplicity.
    pub fn count_with_multiplicity(&self, lo: f64, hi: f64) -> usize {
        self.layers().iter().map(|l| l.count(lo, hi)).sum()
    }

    /// Budan–Fourier count on `(lo, hi]`: an upper bound on the roots there,
    /// equal to the count with multiplicity when `p` is real-rooted.
    pub fn fourier_count(&self, lo: f64, hi: f64) -> usize {
        self.fourier_variations(lo).saturating_sub(self.fourier_variations(hi))
    }

    fn fourier_variations(&self, x: f64) -> usize {
        variations(&self.fourier, x)
    }

    pub fn real_root_count(&self) -> usize {
        self.count_with_multiplicity(-self.bound, self.bound)
    }

    pub fn is_real_rooted(&self) -> bool {
        self.real_root_count() == self.degree
    }

    /// Least real root within `eps`. If the layers miss roots of a floating
    /// point `p`, the result is only guaranteed when no complex roots lie
    /// below it.
    pub fn smallest_root(&self, eps: f64) -> Result<f64> {
        if self.count_distinct(-self.bound, self.bound) == 0 {
            return Err(Error::NoRealRoot);
        }
        self.locate(1, eps)
    }

    /// `j`-th largest root counted with multiplicity (`j = 1` is the largest).
    /// Assumes `p` is real-rooted.
    pub fn kth_largest_root(&self, j: usize, eps: f64) -> Result<f64> {
        if j == 0 || j > self.degree {
            return Err(Error::RootIndexOutOfRange {
                index: j,
                degree: self.degree,
            });
        }
        self.locate(self.degree - j + 1, eps)
    }

    /// Point where the count from the left first reaches `target`. Uses the
    /// gcd layers when they see every root and Budan–Fourier otherwise.
    fn locate(&self, target: usize, eps: f64) -> Result<f64> {
        if eps.is_nan() || eps <= 0.0 {
            return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
        }
        let lo = -self.bound;
        if self.is_real_rooted() {
            return Ok(bisect(lo, self.bound, eps, |x| {
                self.count_with_multiplicity(lo, x) >= target
            }));
        }
        let base = self.fourier_variations(lo);
        Ok(bisect(lo, self.bound, eps, |x| {
            base.saturating_sub(self.fourier_variations(x)) >= target
        }))
    }

    /// Intervals of width at most `eps`, ascending, each holding at least one
    /// distinct root. A count above one means roots closer than `eps`.
    pub fn isolate(&self, eps: f64) -> Vec<RootInterval> {
        let mut out = Vec::new();
        let mut stack = vec![(-self.bound, self.bound)];
        while let Some((lo, hi)) = stack.pop() {
            let count = self.count_distinct(lo, hi);
            if count == 0 {
                continue;
            }
            let mid = 0.5 * (lo + hi);
            if hi - lo <= eps || mid <= lo || mid >= hi {
                out.push(RootInterval { lo, hi, count });
                continue;
            }
            stack.push((mid, hi));
            stack.push((lo, mid));
        }
        out
    }

    /// Real roots, ascending, each paired with its multiplicity.
    pub fn roots_with_multiplicity(&self, eps: f64) -> Vec<(f64, usize)> {
        self.isolate(eps)
            .into_iter()
            .map(|iv| {
                let mult = self.count_with_multiplicity(iv.lo, iv.hi).max(iv.count);
                (iv.midpoint(), mult)
            })
            .collect()
    }
}

fn full_count(layers: &[SturmChain], bound: f64) -> usize {
    layers.iter().map(|l| l.count(-bound, bound)).sum()
}

/// Smallest `x` in `(lo, hi]` with `pred(x)`, assuming `pred` is monotone,
/// false at `lo` and true at `hi`. Result is within `eps / 2` of the switch.
fn bisect(mut lo: f64, mut hi: f64, eps: f64, pred: impl Fn(f64) -> bool) -> f64 {
    while hi - lo > eps {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `1 + max |c_i| / |c_n|` with a small outward margin.
fn cauchy_bound<T: Scalar>(p: &Polynomial<T>) -> f64 {
    let n = p.degree();
    let lead = p.leading().abs().to_real();
    let max = p.coeffs()[..n].iter().map(|c| c.abs().to_real()).fold(0.0, f64::max);
    (1.0 + max / lead) * (1.0 + 1e-9) + 1e-9
}

/// Distinct real roots of `p` in `(lo, hi]`.
pub fn sturm_root_count<T: Scalar>(p: &Polynomial<T>, lo: f64, hi: f64) -> Result<usize> {
    if lo >= hi {
        return Err(Error::EmptyInterval { lo, hi });
    }
    Ok(RootFinder::new(p)?.count_distinct(lo, hi))
}

/// Whether every root of `p` is real, counting multiplicity. `tol` is the
/// relative cutoff used when deciding that a remainder vanishes.
pub fn is_real_rooted<T: Scalar>(p: &Polynomial<T>, tol: f64) -> bool {
    if p.is_zero() {
        return false;
    }
    RootFinder::with_cutoff(p, tol).is_ok_and(|f| f.is_real_rooted())
}

/// Smallest real root within `eps`.
pub fn smallest_root<T: Scalar>(p: &Polynomial<T>, eps: f64) -> Result<f64> {
    RootFinder::new(p)?.smallest_root(eps)
}

pub fn kth_largest_root<T: Scalar>(p: &Polynomial<T>, j: usize, eps: f64) -> Result<f64> {
    RootFinder::new(p)?.kth_largest_root(j, eps)
}

/// All real roots ascending, repeated by multiplicity.
pub fn real_roots<T: Scalar>(p: &Polynomial<T>, eps: f64) -> Result<Vec<f64>> {
    let finder = RootFinder::new(p)?;
    Ok(finder
        .roots_with_multiplicity(eps)
        .into_iter()
        .flat_map(|(r, m)| std::iter::repeat_n(r, m))
        .collect())
}

/// Lower barrier `-p'(x) / p(x)`; below the least root of a real-rooted `p`
/// this is `Σ 1 / (λ_i - x)`.
pub fn barrier_phi<T: Scalar>(p: &Polynomial<T>, x: f64) -> Result<f64> {
    let at = T::from_real(x);
    let value = p.eval(&at);
    if value.is_zero() {
        return Err(Error::AtRoot(x));
    }
    Ok(-(p.derivative().eval(&at) / value).to_real())
}

/// Least root of `p + α p'`; lies strictly below the least root of `p`.
pub fn alpha_min<T: Scalar>(p: &Polynomial<T>, alpha: &T, eps: f64) -> Result<f64> {
    let shifted = p + &p.derivative().scale(alpha);
    smallest_root(&shifted, eps)
}
