//! Closed-form lower bounds on the selected least singular value, and the
//! barrier parameter optimization behind the Jacobi bound.

use serde::Serialize;

use crate::charpoly::{kappa, stable_rank};
use crate::error::{Error, Result};
use crate::expected::check_isotropic;
use crate::family::Mode;
use crate::matrix::{Matrix, SymmetricMatrix};
use crate::scalar::Scalar;
use crate::select::RANK_SLACK;

/// Bounds at or below this are reported as vacuous.
pub const VACUOUS_BELOW: f64 = 1e-12;

/// `(1 − √(k/r))²`, requiring `k ≤ r` up to [`RANK_SLACK`].
fn rank_factor(k: usize, r: f64, what: &'static str) -> Result<f64> {
    let k_f = k as f64;
    if k_f > r + RANK_SLACK {
        return Err(Error::RankExceeded { k, what, value: r });
    }
    let ratio = (k_f / r).min(1.0);
    Ok((1.0 - ratio.sqrt()).powi(2))
}

/// `(1 − √(k/srank(B)))² ‖B‖_F² / m`.
pub fn ss_bound<T: Scalar>(b: &Matrix<T>, k: usize) -> Result<f64> {
    let srank = stable_rank(b)?;
    let fro = b.frobenius_sq().to_real();
    Ok(rank_factor(k, srank, "stable rank")? * fro / b.cols() as f64)
}

/// `(1 − √(k/κ_A))² Tr(A) / m`.
pub fn schatten_bound<T: Scalar>(a: &SymmetricMatrix<T>, k: usize, m: usize) -> Result<f64> {
    let kap = kappa(a)?;
    Ok(rank_factor(k, kap, "kappa")? * a.trace().to_real() / m as f64)
}

/// `(1 − √(k/κ_M))² Tr(M)`.
pub fn muroot_bound<T: Scalar>(mm: &SymmetricMatrix<T>, k: usize) -> Result<f64> {
    let kap = kappa(mm)?;
    Ok(rank_factor(k, kap, "kappa")? * mm.trace().to_real())
}

/// Lower bound on the least zero of `L_k^{(α)}`:
/// `V² + 3 V^{4/3} (U² − V²)^{−1/3}` with `V, U = √(k+α+1) ∓ √k`.
pub fn krasikov_bound(k: usize, alpha: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("krasikov bound needs k >= 1".into()));
    }
    if alpha.is_nan() || alpha <= -1.0 {
        return Err(Error::InvalidArgument(format!(
            "krasikov bound needs alpha > -1, got {alpha}"
        )));
    }
    let k_f = k as f64;
    let s = (k_f + alpha + 1.0).sqrt();
    let v = s - k_f.sqrt();
    let u = s + k_f.sqrt();
    Ok(v * v + 3.0 * v.powf(4.0 / 3.0) * (u * u - v * v).powf(-1.0 / 3.0))
}

fn check_dims(d: usize, k: usize, m: usize) -> Result<()> {
    if k <= d && d <= m {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "need k <= d <= m, got d={d} k={k} m={m}"
        )))
    }
}

/// `(√(d(m−k)) − √(k(m−d)))² / m²`.
pub fn jacobi_bound(d: usize, k: usize, m: usize) -> Result<f64> {
    check_dims(d, k, m)?;
    let (d, k, m) = (d as f64, k as f64, m as f64);
    Ok(((d * (m - k)).sqrt() - (k * (m - d)).sqrt()).powi(2) / (m * m))
}

/// [`jacobi_bound`] with `d + 1` in place of `d`.
pub fn improved_jacobi_bound(d: usize, k: usize, m: usize) -> Result<f64> {
    if !(k <= d + 1 && d < m) {
        return Err(Error::InvalidArgument(format!(
            "need k <= d+1 <= m, got d={d} k={k} m={m}"
        )));
    }
    jacobi_bound(d + 1, k, m)
}

/// `((1 − αm) − √((1 − αm)² + 4αk))/2 + dα`.
pub fn u_alpha(alpha: f64, m: usize, d: usize, k: usize) -> f64 {
    let (m, d, k) = (m as f64, d as f64, k as f64);
    let a = 1.0 - alpha * m;
    (a - (a * a + 4.0 * alpha * k).sqrt()) / 2.0 + d * alpha
}

/// Maximizer of [`u_alpha`]:
/// `(m − 2k)/m² − ((m − 2d)/m²) √(k(m−k)/(d(m−d)))`.
pub fn alpha_star(m: usize, d: usize, k: usize) -> Result<f64> {
    if !(1 <= k && k < d && d < m) {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k < d < m, got d={d} k={k} m={m}"
        )));
    }
    let (m, d, k) = (m as f64, d as f64, k as f64);
    let m2 = m * m;
    Ok((m - 2.0 * k) / m2 - ((m - 2.0 * d) / m2) * (k * (m - k) / (d * (m - d))).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundEntry {
    pub value: Option<f64>,
    pub applicable: bool,
    pub vacuous: bool,
    /// Whether the achieved value clears this bound, once known.
    pub satisfied: Option<bool>,
}

impl BoundEntry {
    fn new(value: Option<f64>, applicable: bool) -> Self {
        let vacuous = value.is_some_and(|v| v <= VACUOUS_BELOW);
        Self {
            value,
            applicable: applicable && value.is_some(),
            vacuous,
            satisfied: None,
        }
    }

    fn unavailable() -> Self {
        Self::new(None, false)
    }
}

/// Every bound for one `(B, k)` side by side with the achieved value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub d: usize,
    pub m: usize,
    pub k: usize,
    pub srank: Option<f64>,
    pub kappa: Option<f64>,
    pub isotropic: bool,
    pub mode: Option<Mode>,
    pub ss_bound: BoundEntry,
    pub schatten_bound: BoundEntry,
    pub jacobi_bound: BoundEntry,
    pub improved_jacobi_bound: BoundEntry,
    /// Krasikov's zero bound for `L_k^{(d−k)}`, divided by `m`.
    pub krasikov_bound: BoundEntry,
    pub achieved_sigma_min_sq: Option<f64>,
    pub epsilon: Option<f64>,
}

impl BoundsReport {
    /// Bounds for a concrete matrix. `mode` restricts the family-specific
    /// bounds to the family actually used; `None` reports them all.
    pub fn for_matrix<T: Scalar>(b: &Matrix<T>, k: usize, mode: Option<Mode>) -> Result<Self> {
        let (d, m) = (b.rows(), b.cols());
        let srank = stable_rank(b)?;
        let a = b.outer_gram();
        let kap = kappa(&a)?;
        let isotropic = d <= m && check_isotropic(b).is_ok();
        let in_rank = k as f64 <= srank + RANK_SLACK;

        let ss = BoundEntry::new(ss_bound(b, k).ok(), in_rank);
        let schatten = BoundEntry::new(schatten_bound(&a, k, m).ok(), in_rank);
        let mut report = Self::family_bounds(d, m, k, isotropic && in_rank, mode);
        report.srank = Some(srank);
        report.kappa = Some(kap);
        report.ss_bound = ss;
        report.schatten_bound = schatten;
        Ok(report)
    }

    /// Bounds for an isotropic `d × m` instance given only its shape.
    pub fn for_dimensions(d: usize, m: usize, k: usize) -> Result<Self> {
        check_dims(d, k, m)?;
        let mut report = Self::family_bounds(d, m, k, true, None);
        let (d_f, k_f, m_f) = (d as f64, k as f64, m as f64);
        report.srank = Some(d_f);
        report.kappa = Some(d_f);
        report.ss_bound = BoundEntry::new(Some((1.0 - (k_f / d_f).sqrt()).powi(2) * d_f / m_f), true);
        Ok(report)
    }

    fn family_bounds(d: usize, m: usize, k: usize, isotropic: bool, mode: Option<Mode>) -> Self {
        let without_ok = isotropic && mode != Some(Mode::With);
        let with_ok = isotropic && mode != Some(Mode::Without);
        let krasikov = if k >= 1 && k <= d {
            krasikov_bound(k, (d - k) as f64).ok().map(|v| v / m as f64)
        } else {
            None
        };
        Self {
            d,
            m,
            k,
            srank: None,
            kappa: None,
            isotropic,
            mode,
            ss_bound: BoundEntry::unavailable(),
            schatten_bound: BoundEntry::unavailable(),
            jacobi_bound: BoundEntry::new(jacobi_bound(d, k, m).ok(), without_ok),
            improved_jacobi_bound: BoundEntry::new(improved_jacobi_bound(d, k, m).ok(), without_ok),
            krasikov_bound: BoundEntry::new(krasikov, with_ok),
            achieved_sigma_min_sq: None,
            epsilon: None,
        }
    }

    pub fn entries(&self) -> [(&'static str, &BoundEntry); 5] {
        [
            ("ss", &self.ss_bound),
            ("schatten", &self.schatten_bound),
            ("jacobi", &self.jacobi_bound),
            ("improved_jacobi", &self.improved_jacobi_bound),
            ("krasikov", &self.krasikov_bound),
        ]
    }

    fn entries_mut(&mut self) -> [&mut BoundEntry; 5] {
        [
            &mut self.ss_bound,
            &mut self.schatten_bound,
            &mut self.jacobi_bound,
            &mut self.improved_jacobi_bound,
            &mut self.krasikov_bound,
        ]
    }

    /// Record the achieved `σ_min²` and mark each applicable bound as
    /// satisfied when `achieved ≥ bound − eps`.
    pub fn with_achieved(mut self, achieved: f64, eps: f64) -> Self {
        self.achieved_sigma_min_sq = Some(achieved);
        self.epsilon = Some(eps);
        for entry in self.entries_mut() {
            entry.satisfied = match (entry.applicable, entry.value) {
                (true, Some(v)) => Some(achieved >= v - eps),
                _ => None,
            };
        }
        self
    }

    /// True when no applicable bound is violated.
    pub fn all_satisfied(&self) -> bool {
        self.entries().iter().all(|(_, e)| e.satisfied != Some(false))
    }

    /// Whether any bound's guarantee applies.
    pub fn guarantee_applicable(&self) -> bool {
        self.entries().iter().any(|(_, e)| e.applicable)
    }
}
