use serde::Serialize;

use crate::dpym::dpym_predictive;
use crate::error::Result;
use crate::info::{kl_divergence, ProbabilityVector};
use crate::mpy::PyParams;
use crate::selection::upper_bound_f;
use crate::sim::sampling::LabeledSample;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveRow {
    pub alpha: f64,
    /// `KL(p || q)` with `p` aligned to the predictive vector.
    pub kl: f64,
    /// `f(d, alpha) - H(p)` using the true unseen and singleton masses.
    pub bound_gap: f64,
}

/// KL divergence to the DPYM predictive and the bound on it, along a grid of
/// concentrations at fixed `d`. Grid points outside the parameter domain are
/// skipped.
pub fn curve_sweep(p: &ProbabilityVector, sample: &LabeledSample, d: f64, alpha_grid: &[f64]) -> Result<Vec<CurveRow>> {
    let y = sample.frequency_vector();
    let aligned = sample.aligned_population(p);
    let h = p.entropy();
    let c0 = sample.unseen_mass(p);
    let c1 = sample.singleton_mass(p);
    let k = p.len() as f64;
    let mut rows = Vec::with_capacity(alpha_grid.len());
    for &alpha in alpha_grid {
        let Ok(params) = PyParams::new(d, alpha) else { continue };
        let pred = dpym_predictive(&y, &params)?;
        let q = pred.q_prefix(aligned.len())?;
        let kl = kl_divergence(&aligned, &q)?;
        let bound = upper_bound_f(d, alpha, y.sample_size(), y.observed_species(), c0, c1, k)?;
        rows.push(CurveRow { alpha, kl, bound_gap: bound - h });
    }
    Ok(rows)
}

/// `points` values spaced evenly in log scale over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..points).map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp()).collect()
        }
    }
}
