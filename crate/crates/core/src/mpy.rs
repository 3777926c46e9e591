//! The marginal Pitman-Yor distribution.
//!
//! A single draw `Z` from a `PY(d, alpha)` random measure has the pmf
//!
//! ```text
//! P(k) = (1 - d)/(alpha + 1) * prod_{j=1..k-1} (alpha + j d) / (alpha + j d + 1)
//! ```
//!
//! which is geometric with success probability `1/(alpha + 1)` when `d = 0`
//! and a Waring (power-law, index `-1/d`) distribution when `d > 0`. With
//! `x = alpha/d`, `y = (alpha + 1)/d` the Waring form is
//! `P(k) = A * Γ(x + k)/Γ(y + k)` where `A = (1 - d) Γ(y) / (d Γ(x + 1))`.
//! Everything here is evaluated in log space.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::ln_gamma_ratio;
use crate::sum::CompensatedSum;

/// Default truncation index for the tail-corrected entropy.
pub const DEFAULT_TRUNCATION: usize = 10_000;

/// Smallest truncation index accepted for `d > 0`.
pub const MIN_TRUNCATION: usize = 10;

/// Discounts below this are treated as zero by the pmf and entropy.
pub const GEOMETRIC_DISCOUNT: f64 = 1e-14;

/// Stick-breaking gives up after this many sticks.
pub const STICK_CAP: usize = 10_000_000;

/// Pitman-Yor discount `d` and concentration `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct PyParams {
    d: f64,
    alpha: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    d: f64,
    alpha: f64,
}

impl TryFrom<RawParams> for PyParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        PyParams::new(r.d, r.alpha)
    }
}

impl From<PyParams> for RawParams {
    fn from(p: PyParams) -> Self {
        RawParams { d: p.d, alpha: p.alpha }
    }
}

impl PyParams {
    pub fn new(d: f64, alpha: f64) -> Result<Self> {
        let ok = d.is_finite() && alpha.is_finite() && (0.0..1.0).contains(&d) && alpha > -d;
        if !ok {
            return Err(Error::InvalidParams { d, alpha });
        }
        Ok(Self { d, alpha })
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `PY(d, alpha + offset * d)`: the law whose products start at
    /// `j = offset + 1` of this one's concentration ladder.
    pub fn shifted(&self, offset: usize) -> Self {
        Self { d: self.d, alpha: self.alpha + offset as f64 * self.d }
    }

    /// Discounts this small are evaluated as `d = 0`; `alpha/d` would
    /// otherwise overflow, and the pmf differs from the geometric one by a
    /// relative `O(d k^2)`.
    pub fn is_geometric(&self) -> bool {
        self.d < GEOMETRIC_DISCOUNT
    }

    /// `(x, rho)` with `x = alpha/d` and `rho = 1/d`; only meaningful for `d > 0`.
    fn waring(&self) -> (f64, f64) {
        (self.alpha / self.d, 1.0 / self.d)
    }

    /// `ln A` of the Waring form.
    fn ln_waring_prefactor(&self) -> f64 {
        let (x, rho) = self.waring();
        // Γ(y)/Γ(x + 1) = Γ(x + rho) / Γ(x + 1)
        // rho >= 1 and x + 1 > 0 on the parameter domain.
        (1.0 - self.d).ln() - self.d.ln() - ln_gamma_ratio(x + 1.0, rho - 1.0)
    }
}

fn check_index(k: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidIndex(0));
    }
    Ok(())
}

/// `ln P(k)` for `k >= 1`, finite for any `k` representable as `u64`.
pub fn mpy_log_pmf(params: &PyParams, k: u64) -> Result<f64> {
    check_index(k)?;
    let alpha = params.alpha;
    let km1 = (k - 1) as f64;
    if params.is_geometric() {
        return Ok(-alpha.ln_1p() - km1 * (1.0 / alpha).ln_1p());
    }
    let (x, rho) = params.waring();
    let head = (1.0 - params.d).ln() - alpha.ln_1p();
    // prod_{j=1}^{k-1} (x + j)/(x + rho + j) = Γ(x+k)Γ(x+rho+1) / (Γ(x+1)Γ(x+rho+k))
    let body = if k <= 64 {
        (1..k).map(|j| (-rho / (x + rho + j as f64)).ln_1p()).sum::<f64>()
    } else {
        ln_gamma_ratio(x + k as f64, rho) - ln_gamma_ratio(x + 1.0, rho)
    };
    Ok(head + body)
}

/// `P(k)` for `k >= 1`.
pub fn mpy_pmf(params: &PyParams, k: u64) -> Result<f64> {
    check_index(k)?;
    if params.is_geometric() {
        let a = params.alpha;
        return Ok((a / (a + 1.0)).powf((k - 1) as f64) / (a + 1.0));
    }
    Ok(mpy_log_pmf(params, k)?.exp())
}

/// Lazily generated stick-breaking weights of `PY(d, alpha)`.
///
/// `V_i ~ Beta(1 - d, alpha + i d)`, `pi_i = V_i prod_{j<i} (1 - V_j)`.
/// The Beta variate is built from two unit-scale Gamma draws.
pub struct StickBreaking<'a, R: Rng + ?Sized> {
    params: PyParams,
    rng: &'a mut R,
    index: usize,
    residual: f64,
}

impl<'a, R: Rng + ?Sized> StickBreaking<'a, R> {
    pub fn new(params: PyParams, rng: &'a mut R) -> Self {
        Self { params, rng, index: 0, residual: 1.0 }
    }

    /// Mass not yet assigned to any emitted stick.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn sticks_drawn(&self) -> usize {
        self.index
    }
}

pub(crate) fn beta_variate<R: Rng + ?Sized>(rng: &mut R, a: f64, b: f64) -> f64 {
    let ga = Gamma::new(a, 1.0).expect("positive shape").sample(rng);
    let gb = Gamma::new(b, 1.0).expect("positive shape").sample(rng);
    let total = ga + gb;
    if total > 0.0 {
        ga / total
    } else {
        a / (a + b)
    }
}

impl<R: Rng + ?Sized> Iterator for StickBreaking<'_, R> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        self.index += 1;
        let a = 1.0 - self.params.d;
        let b = self.params.alpha + self.index as f64 * self.params.d;
        let v = beta_variate(self.rng, a, b);
        let w = v * self.residual;
        self.residual *= 1.0 - v;
        Some(w)
    }
}

/// Draws stick-breaking weights until the unassigned mass drops below
/// `mass_tol`.
pub fn stick_breaking_sample<R: Rng + ?Sized>(
    params: &PyParams,
    rng: &mut R,
    mass_tol: f64,
) -> Result<Vec<f64>> {
    if !(mass_tol > 0.0 && mass_tol < 1.0) {
        return Err(Error::InvalidMassTolerance(mass_tol));
    }
    let mut sticks = StickBreaking::new(*params, rng);
    let mut weights = Vec::new();
    while sticks.residual() >= mass_tol {
        if weights.len() >= STICK_CAP {
            return Err(Error::StickCapReached { cap: STICK_CAP, residual: sticks.residual() });
        }
        weights.push(sticks.next().expect("infinite iterator"));
    }
    Ok(weights)
}

/// Entropy of the marginal Pitman-Yor distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MpyEntropyResult {
    pub value: f64,
    pub truncation_n: usize,
    pub remainder_bound: f64,
}

/// Closed-form entropy of the geometric case: `(1+a) ln(1+a) - a ln a`.
pub fn geometric_entropy(alpha: f64) -> f64 {
    if alpha == 0.0 {
        return 0.0;
    }
    // = ln(1 + a) + a ln(1 + 1/a), free of cancellation for large a
    alpha.ln_1p() + alpha * (1.0 / alpha).ln_1p()
}

/// Tail correction as written with `1/(1-d)`:
/// `A {(n+1)^((d-1)/d) ln(n+1) / (1-d) + d (n+1)^((d-1)/d) / (d-1)^2}`.
pub(crate) fn tail_correction(ln_prefactor: f64, d: f64, n: usize) -> f64 {
    let m = (n + 1) as f64;
    let ln_m = m.ln();
    let scale = (ln_prefactor + (d - 1.0) / d * ln_m).exp();
    scale * (ln_m / (1.0 - d) + d / ((d - 1.0) * (d - 1.0)))
}

/// The same correction written with `1/(d-1)` factors and an outer minus:
/// `-A {(n+1)^((d-1)/d) ln(n+1) / (d-1) - d (n+1)^((d-1)/d) / (d-1)^2}`.
#[cfg(test)]
pub(crate) fn tail_correction_negated_form(ln_prefactor: f64, d: f64, n: usize) -> f64 {
    let m = (n + 1) as f64;
    let power = (ln_prefactor + (d - 1.0) / d * m.ln()).exp();
    -(power * m.ln() / (d - 1.0) - d * power / ((d - 1.0) * (d - 1.0)))
}

/// Running partial sums of the Waring series up to some index.
struct PartialSums {
    entropy: f64,
    mass: f64,
    last_ln_p: f64,
    ln_prefactor: f64,
}

/// Generates `ln p_k` by the exact one-step recurrence
/// `p_{k+1}/p_k = (x + k)/(x + rho + k)` and accumulates until `stop`.
fn waring_partial_sums(params: &PyParams, mut stop: impl FnMut(usize, f64) -> bool) -> (PartialSums, usize) {
    let (x, rho) = params.waring();
    let ln_prefactor = params.ln_waring_prefactor();
    let mut ln_p = CompensatedSum::new();
    ln_p.add((1.0 - params.d).ln() - params.alpha.ln_1p());
    let mut entropy = CompensatedSum::new();
    let mut mass = CompensatedSum::new();
    let mut k = 1usize;
    loop {
        let lp = ln_p.value();
        let p = lp.exp();
        entropy.add(-p * lp);
        mass.add(p);
        if stop(k, lp) {
            let sums = PartialSums { entropy: entropy.value(), mass: mass.value(), last_ln_p: lp, ln_prefactor };
            return (sums, k);
        }
        ln_p.add((-rho / (x + rho + k as f64)).ln_1p());
        k += 1;
    }
}

/// Combines the partial sums at index `n` with the closed-form tail.
fn assemble(params: &PyParams, sums: &PartialSums, n: usize) -> MpyEntropyResult {
    let (x, rho) = params.waring();
    let unassigned = (1.0 - sums.mass).max(0.0);
    let value = sums.entropy - sums.ln_prefactor * unassigned + tail_correction(sums.ln_prefactor, params.d, n);
    // Heuristic: twice the last summand of A Σ r_k ln r_k, inflated by the
    // size of the O(1/k) correction in Γ(x + k)/Γ(y + k) ~ k^(-1/d).
    let last_p = sums.last_ln_p.exp();
    let summand = last_p * (sums.last_ln_p - sums.ln_prefactor).abs();
    let remainder_bound = 2.0 * (1.0 + x + x + rho) * summand;
    MpyEntropyResult { value: value.max(0.0), truncation_n: n, remainder_bound }
}

/// Shannon entropy of `MPY(d, alpha)`.
///
/// For `d = 0` the closed form is exact. For `d > 0` the first
/// `truncation_n` terms are summed explicitly and the remainder is replaced
/// by the integral of its `k^(-1/d)` asymptote, leaving an
/// `O(n^(-1/d) log n)` error.
pub fn mpy_entropy(params: &PyParams, truncation_n: usize) -> Result<MpyEntropyResult> {
    if params.is_geometric() {
        return Ok(MpyEntropyResult { value: geometric_entropy(params.alpha), truncation_n, remainder_bound: 0.0 });
    }
    if truncation_n < MIN_TRUNCATION {
        return Err(Error::TruncationTooSmall(truncation_n));
    }
    let (sums, n) = waring_partial_sums(params, |k, _| k >= truncation_n);
    Ok(assemble(params, &sums, n))
}

/// Hard ceiling on the number of explicitly summed terms.
pub const MAX_TRUNCATION: usize = 10_000_000;

/// Relative accuracy demanded of `Γ(x + k)/Γ(y + k) ≈ (x + k + (rho - 1)/2)^(-rho)`
/// before the tail is replaced by its integral.
const SHIFTED_ASYMPTOTE_TOL: f64 = 1e-8;

/// Entropy of `MPY(d, alpha)` that stays accurate for any concentration.
///
/// The fixed-`n` evaluator assumes `Γ(x + k)/Γ(y + k) ≈ k^(-1/d)`, which
/// needs `k >> x`. Here the tail is matched to the shifted power law
/// `A (k + c)^(-rho)` with `c = x + (rho - 1)/2`, whose relative error is
/// about `rho^3 / (24 (k + c)^2)` independently of `x`, and integrated from
/// `n + 1/2`. The unassigned mass `1 - Σ_{k<=n} p_k` is used exactly.
///
/// Summation runs to at least `truncation_n` terms and stops at the first
/// index where either the shifted asymptote is accurate or the remaining mass
/// is negligible (then no tail term is added).
pub fn mpy_entropy_auto(params: &PyParams, truncation_n: usize) -> Result<MpyEntropyResult> {
    if params.is_geometric() {
        return mpy_entropy(params, truncation_n);
    }
    let truncation_n = truncation_n.max(MIN_TRUNCATION);
    let (x, rho) = params.waring();
    let c = x + 0.5 * (rho - 1.0);
    let w_min = (rho.powi(3) / (24.0 * SHIFTED_ASYMPTOTE_TOL)).sqrt();
    let mut negligible = false;
    let mut capped = false;
    let (sums, n) = waring_partial_sums(params, |k, lp| {
        if k < truncation_n {
            return false;
        }
        if c + k as f64 >= w_min {
            return true;
        }
        // p_{j+1}/p_j = (x + j)/(y + j) <= (x + k)/(y + k) for j >= k, so
        // the remaining mass is at most p_k (y + k)/rho.
        let tail_mass = lp.exp() * (x + rho + k as f64) / rho;
        if tail_mass * (1.0 - lp) < 1e-18 {
            negligible = true;
            return true;
        }
        if k >= MAX_TRUNCATION {
            capped = true;
            return true;
        }
        false
    });
    if negligible {
        // 1 - mass is rounding noise here while ln A can be huge.
        return Ok(MpyEntropyResult { value: sums.entropy.max(0.0), truncation_n: n, remainder_bound: 1e-15 });
    }
    let unassigned = (1.0 - sums.mass).max(0.0);
    let head = sums.entropy - sums.ln_prefactor * unassigned;
    if capped {
        return Err(Error::InvalidArgument(format!(
            "MPY(d = {}, alpha = {}) tail is not asymptotic within {MAX_TRUNCATION} terms",
            params.d, params.alpha
        )));
    }
    // Σ_{k>n} -p_k ln r_k ≈ A rho ∫_U^∞ u^(-rho) ln u du
    let u = n as f64 + 0.5 + c;
    let ln_u = u.ln();
    let scale = (sums.ln_prefactor + (1.0 - rho) * ln_u).exp();
    let tail = scale * rho * (ln_u / (rho - 1.0) + 1.0 / ((rho - 1.0) * (rho - 1.0)));
    let rel = (rho * (rho * rho - 1.0).abs() / 24.0 + rho * rho / 24.0 + 1.0) / (u * u);
    Ok(MpyEntropyResult { value: (head + tail).max(0.0), truncation_n: n, remainder_bound: tail.abs() * rel })
}

/// `f(lambda t) / f(t)` for the step-function extension `f(t) = P(ceil(t))`.
///
/// Tends to `lambda^(-1/d)` as `t` grows.
pub fn tail_ratio(params: &PyParams, t: f64, lambda: f64) -> Result<f64> {
    if params.is_geometric() {
        return Err(Error::InvalidArgument("tail_ratio needs d > 0".into()));
    }
    if !(t >= 1.0 && t.is_finite()) || !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("need t >= 1 and lambda > 0, got t = {t}, lambda = {lambda}")));
    }
    let k_num = (lambda * t).ceil();
    let k_den = t.ceil();
    if k_num == k_den {
        return Ok(1.0);
    }
    let (x, rho) = params.waring();
    Ok((ln_gamma_ratio(x + k_num, rho) - ln_gamma_ratio(x + k_den, rho)).exp())
}
