//! Choosing `(d, alpha)` by minimizing an upper bound on the cross entropy
//! `H(p, q)` between the truth and the DPYM predictive vector.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

use crate::classical::{coverage_estimates, CoverageEstimates, FrequencyVector};
use crate::error::{Error, Result};
use crate::mpy::PyParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateLabel {
    InteriorPlus,
    InteriorMinus,
    BoundaryD0,
    BoundaryD1,
    BoundaryFace,
    DefaultLargeSample,
    Clamped,
}

impl CandidateLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            CandidateLabel::InteriorPlus => "interior_plus",
            CandidateLabel::InteriorMinus => "interior_minus",
            CandidateLabel::BoundaryD0 => "boundary_d0",
            CandidateLabel::BoundaryD1 => "boundary_d1",
            CandidateLabel::BoundaryFace => "boundary_face",
            CandidateLabel::DefaultLargeSample => "default_large_sample",
            CandidateLabel::Clamped => "clamped",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub params: PyParams,
    pub label: CandidateLabel,
    /// Estimated bound at `params`; absent for the large-sample default.
    pub objective: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionConfig {
    /// Discount used when no singletons were observed.
    pub d0_default: f64,
    /// Concentration used when no singletons were observed.
    pub alpha0_default: f64,
    /// The `d = 1 - epsilon` boundary candidate.
    pub epsilon_boundary: f64,
    /// Offset applied when a candidate lands on `alpha <= -d`.
    pub epsilon_clamp: f64,
    /// Use `(d0_default, 0)` instead of `(0, alpha_0)` as the `d = 0`
    /// boundary candidate.
    #[serde(default)]
    pub literal_d0_candidate: bool,
    /// Also minimize along the face `alpha = -d + epsilon_clamp`, which the
    /// two boundary lines and the interior roots do not reach.
    #[serde(default = "default_face_candidate")]
    pub face_candidate: bool,
}

fn default_face_candidate() -> bool {
    true
}

impl Default for SelectionConfig {
    fn default() -> Self {
        Self { d0_default: 0.0, alpha0_default: 1e-8, epsilon_boundary: 1e-6, epsilon_clamp: 1e-6, literal_d0_candidate: false, face_candidate: true }
    }
}

impl SelectionConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !(0.0..1.0).contains(&self.d0_default)
            || !positive(self.alpha0_default)
            || !positive(self.epsilon_boundary)
            || self.epsilon_boundary >= 1.0
            || !positive(self.epsilon_clamp)
        {
            return Err(Error::InvalidArgument(format!("invalid selection config {self:?}")));
        }
        PyParams::new(self.d0_default, self.alpha0_default).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionRule {
    /// No singletons: the fixed defaults are used.
    LargeSampleDefaults,
    /// Minimum of the estimated bound over the candidate set.
    CandidateArgmin,
}

impl SelectionRule {
    pub fn describe(&self) -> &'static str {
        match self {
            SelectionRule::LargeSampleDefaults => "large-sample defaults",
            SelectionRule::CandidateArgmin => "candidate argmin",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionDiagnostics {
    pub rule: SelectionRule,
    pub coverage: CoverageEstimates,
    pub candidates: Vec<Candidate>,
    pub chosen: Candidate,
}

/// `log(N + alpha) - (C1 + C0) log(1 - d) + (C0/2)(K - T + 1) log((alpha + T d + 1)/(alpha + T d))`.
///
/// Bounds `H(p, q)` when the unobserved species are ordered by decreasing
/// probability.
pub fn upper_bound_f(d: f64, alpha: f64, n: u64, t: usize, c0: f64, c1: f64, k: f64) -> Result<f64> {
    let f = 0.5 * c0 * (k - t as f64 + 1.0);
    bound_with_f(d, alpha, n, t, c0 + c1, f)
}

fn bound_with_f(d: f64, alpha: f64, n: u64, t: usize, c01: f64, f: f64) -> Result<f64> {
    let shifted = alpha + t as f64 * d;
    if !(shifted > 0.0) {
        return Err(Error::UpperBoundUndefined(shifted));
    }
    let n = n as f64;
    Ok((n + alpha).ln() - c01 * (-d).ln_1p() + f * (1.0 / shifted).ln_1p())
}

/// The bound with `C0`, `C1`, `K` replaced by their Good-Turing estimates.
pub fn estimated_upper_bound(y: &FrequencyVector, d: f64, alpha: f64) -> Result<f64> {
    let cov = coverage_estimates(y);
    bound_with_f(d, alpha, y.sample_size(), y.observed_species(), cov.c01_hat, cov.f_hat)
}

/// Interior stationary points of the estimated bound.
///
/// Setting both partial derivatives to zero forces
/// `alpha = T (1 - d)/C01 - N` and leaves a quadratic `a d^2 + b d + c = 0`.
/// Roots outside the parameter domain are dropped.
pub fn critical_candidates(y: &FrequencyVector) -> Vec<Candidate> {
    if y.singletons() == 0 {
        return Vec::new();
    }
    let cov = coverage_estimates(y);
    let (n, t) = (y.sample_size() as f64, y.observed_species() as f64);
    let (c, f) = (cov.c01_hat, cov.f_hat);
    if !(c > 0.0) || c >= t / n {
        return Vec::new();
    }
    let qa = (c - 1.0).powi(2) * t * t;
    let qb = ((2.0 * t - 2.0 * c * n + c) * (c - 1.0) + f * c) * t;
    let qc = (t - c * n + c) * (t - c * n) - t * f * c;
    let disc = qb * qb - 4.0 * qa * qc;
    if qa == 0.0 || disc < 0.0 {
        return Vec::new();
    }
    let root = disc.sqrt();
    let d_max = (t - c * n) / (t - c);
    let mut out = Vec::new();
    for (d, label) in [((-qb + root) / (2.0 * qa), CandidateLabel::InteriorPlus), ((-qb - root) / (2.0 * qa), CandidateLabel::InteriorMinus)] {
        let alpha = t * (1.0 - d) / c - n;
        if !(d >= 0.0 && d < 1.0 && d < d_max && alpha + t * d > 0.0) {
            continue;
        }
        let Ok(params) = PyParams::new(d, alpha) else { continue };
        let objective = bound_with_f(d, alpha, y.sample_size(), y.observed_species(), c, f).ok();
        out.push(Candidate { params, label, objective });
    }
    out
}

/// Stationary `alpha` of the bound along a fixed `d`: with `s = alpha + T d`,
/// the positive root of `s^2 + (1 - F) s - F (N - T d) = 0`.
fn stationary_alpha(n: f64, td: f64, f: f64) -> Result<f64> {
    let disc = (1.0 - f).powi(2) + 4.0 * f * (n - td);
    if disc < 0.0 {
        return Err(Error::NegativeDiscriminant(disc));
    }
    Ok((-(2.0 * td - f + 1.0) + disc.sqrt()) / 2.0)
}

fn candidate_at(y: &FrequencyVector, cov: &CoverageEstimates, d: f64, alpha: f64, label: CandidateLabel, cfg: &SelectionConfig) -> Result<Candidate> {
    let (alpha, label) = if alpha <= -d { (-d + cfg.epsilon_clamp, CandidateLabel::Clamped) } else { (alpha, label) };
    let params = PyParams::new(d, alpha)?;
    let objective = bound_with_f(d, alpha, y.sample_size(), y.observed_species(), cov.c01_hat, cov.f_hat).ok();
    Ok(Candidate { params, label, objective })
}

/// Minimizers of the bound along `d = 0` and `d = 1 - epsilon`.
pub fn boundary_candidates(y: &FrequencyVector, cfg: &SelectionConfig) -> Result<Vec<Candidate>> {
    let cov = coverage_estimates(y);
    let n = y.sample_size() as f64;
    let t = y.observed_species() as f64;
    let d1 = 1.0 - cfg.epsilon_boundary;
    let first = if cfg.literal_d0_candidate {
        candidate_at(y, &cov, cfg.d0_default, 0.0, CandidateLabel::BoundaryD0, cfg)?
    } else {
        candidate_at(y, &cov, 0.0, stationary_alpha(n, 0.0, cov.f_hat)?, CandidateLabel::BoundaryD0, cfg)?
    };
    let second = candidate_at(y, &cov, d1, stationary_alpha(n, t * d1, cov.f_hat)?, CandidateLabel::BoundaryD1, cfg)?;
    Ok(vec![first, second])
}

/// Minimizer of the bound along `alpha = -d + eps`, `d in [0, d_max]`.
///
/// With `s = d (T - 1) + eps` the derivative
/// `-1/(N - d + eps) + C01/(1 - d) - F (T - 1)/(s (s + 1))` is increasing in
/// `d`, so the restriction is convex and bisection on the derivative finds
/// its minimum.
pub fn face_candidate(y: &FrequencyVector, cfg: &SelectionConfig) -> Result<Candidate> {
    let cov = coverage_estimates(y);
    let n = y.sample_size() as f64;
    let t = y.observed_species() as f64;
    let eps = cfg.epsilon_clamp;
    let d_max = 1.0 - cfg.epsilon_boundary;
    let slope = |d: f64| {
        let s = d * (t - 1.0) + eps;
        -1.0 / (n - d + eps) + cov.c01_hat / (1.0 - d) - cov.f_hat * (t - 1.0) / (s * (s + 1.0))
    };
    let d = if slope(0.0) >= 0.0 {
        0.0
    } else if slope(d_max) <= 0.0 {
        d_max
    } else {
        let (mut lo, mut hi) = (0.0, d_max);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if slope(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let params = PyParams::new(d, -d + eps)?;
    let objective = bound_with_f(d, -d + eps, y.sample_size(), y.observed_species(), cov.c01_hat, cov.f_hat).ok();
    Ok(Candidate { params, label: CandidateLabel::BoundaryFace, objective })
}

fn by_objective_then_params(a: &Candidate, b: &Candidate) -> Ordering {
    let oa = a.objective.unwrap_or(f64::INFINITY);
    let ob = b.objective.unwrap_or(f64::INFINITY);
    oa.total_cmp(&ob)
        .then(a.params.d().total_cmp(&b.params.d()))
        .then(a.params.alpha().total_cmp(&b.params.alpha()))
}

/// The selected `(d, alpha)` together with every candidate considered.
///
/// Without singletons the large-sample defaults are returned; otherwise the
/// candidate with the smallest estimated bound (ties to smaller `d`, then
/// smaller `alpha`).
pub fn select_params(y: &FrequencyVector, cfg: &SelectionConfig) -> (PyParams, SelectionDiagnostics) {
    let coverage = coverage_estimates(y);
    let defaults = PyParams::new(cfg.d0_default, cfg.alpha0_default).unwrap_or_else(|_| PyParams::new(0.0, 1e-8).expect("valid"));
    if y.singletons() == 0 {
        let chosen = Candidate { params: defaults, label: CandidateLabel::DefaultLargeSample, objective: None };
        let diagnostics = SelectionDiagnostics { rule: SelectionRule::LargeSampleDefaults, coverage, candidates: vec![chosen], chosen };
        return (defaults, diagnostics);
    }
    let mut candidates = critical_candidates(y);
    candidates.extend(boundary_candidates(y, cfg).unwrap_or_default());
    if cfg.face_candidate {
        candidates.extend(face_candidate(y, cfg).ok());
    }
    let chosen = candidates
        .iter()
        .filter(|c| c.objective.is_some_and(f64::is_finite))
        .min_by(|a, b| by_objective_then_params(a, b))
        .copied()
        .unwrap_or(Candidate { params: defaults, label: CandidateLabel::DefaultLargeSample, objective: None });
    let diagnostics = SelectionDiagnostics { rule: SelectionRule::CandidateArgmin, coverage, candidates, chosen };
    (chosen.params, diagnostics)
}
