//! The Dirichlet-Pitman-Yor mixture: Dirichlet mass on the observed species,
//! Pitman-Yor mass on the unseen ones.
//!
//! Given `y` with `T` species and sample size `N`, the predictive probability
//! of observed species `i` is `(n_i - d)/(N + alpha)`, and the remaining
//! `(alpha + T d)/(N + alpha)` is spread over new species by
//! `MPY(d, alpha + T d)`.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::Serialize;

use crate::classical::FrequencyVector;
use crate::error::{Error, Result};
use crate::estimate::{EntropyEstimate, Method};
use crate::info::{entropy_of, neg_x_log_x};
use crate::mpy::{mpy_entropy_auto, mpy_pmf, PyParams, StickBreaking, STICK_CAP};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DpymPredictive {
    /// `(n_i - d)/(N + alpha)` in the order of `source`.
    pub head: Vec<f64>,
    /// `(alpha + T d)/(N + alpha)`.
    pub tail_weight: f64,
    /// `PY(d, alpha + T d)`: the law of the unseen species given a new one.
    pub tail_params: PyParams,
    pub source: FrequencyVector,
    pub params: PyParams,
}

impl DpymPredictive {
    /// Predictive mass of the `k`-th new species, `k >= 1`.
    pub fn tail_mass(&self, k: u64) -> Result<f64> {
        Ok(self.tail_weight * mpy_pmf(&self.tail_params, k)?)
    }

    /// The first `len` entries of the infinite vector `q`: the head followed
    /// by the tail masses.
    pub fn q_prefix(&self, len: usize) -> Result<Vec<f64>> {
        let mut q: Vec<f64> = self.head.iter().copied().take(len).collect();
        let mut k = 1u64;
        while q.len() < len {
            q.push(self.tail_mass(k)?);
            k += 1;
        }
        Ok(q)
    }
}

pub fn dpym_predictive(y: &FrequencyVector, params: &PyParams) -> Result<DpymPredictive> {
    let n = y.sample_size() as f64;
    let t = y.observed_species();
    let normalizer = n + params.alpha();
    if !(normalizer > 0.0) {
        return Err(Error::NonPositiveNormalizer(normalizer));
    }
    let d = params.d();
    let head = y.counts().iter().map(|&c| (c as f64 - d) / normalizer).collect();
    let tail_params = params.shifted(t);
    let tail_weight = (params.alpha() + t as f64 * d) / normalizer;
    Ok(DpymPredictive { head, tail_weight, tail_params, source: y.clone(), params: *params })
}

/// Entropy of the `(T + 1)`-vector `(head, tail_weight)`.
pub fn dpym_head_entropy(pred: &DpymPredictive) -> f64 {
    entropy_of(&pred.head) + neg_x_log_x(pred.tail_weight)
}

/// `H(q) = H(q*) + tail_weight * H(MPY(d, alpha + T d))`.
pub fn dpym_entropy(y: &FrequencyVector, params: &PyParams, truncation_n: usize) -> Result<EntropyEstimate> {
    let pred = dpym_predictive(y, params)?;
    let head = dpym_head_entropy(&pred);
    let (value, n, bound) = if pred.tail_weight > 0.0 {
        let tail = mpy_entropy_auto(&pred.tail_params, truncation_n)?;
        (head + pred.tail_weight * tail.value, tail.truncation_n, pred.tail_weight * tail.remainder_bound)
    } else {
        (head, truncation_n, 0.0)
    };
    Ok(EntropyEstimate {
        value,
        method: Method::DpymFixed,
        params_used: Some(*params),
        truncation_n: Some(n),
        remainder_bound: Some(bound),
        selection: None,
    })
}

/// One draw of the infinite vector from the mixture: Dirichlet weights on
/// the observed species and the unseen block, the latter split by
/// stick-breaking until less than `mass_tol` is left unassigned.
pub fn sample_dpym<R: Rng + ?Sized>(
    y: &FrequencyVector,
    params: &PyParams,
    rng: &mut R,
    mass_tol: f64,
) -> Result<Vec<f64>> {
    if !(mass_tol > 0.0 && mass_tol < 1.0) {
        return Err(Error::InvalidMassTolerance(mass_tol));
    }
    let t = y.observed_species();
    let d = params.d();
    let tail_shape = params.alpha() + t as f64 * d;
    let mut weights: Vec<f64> = y
        .counts()
        .iter()
        .map(|&c| Gamma::new(c as f64 - d, 1.0).expect("positive shape").sample(rng))
        .collect();
    let tail_gamma = if tail_shape > 0.0 { Gamma::new(tail_shape, 1.0).expect("positive shape").sample(rng) } else { 0.0 };
    let total: f64 = weights.iter().sum::<f64>() + tail_gamma;
    for w in &mut weights {
        *w /= total;
    }
    let tail_block = tail_gamma / total;
    if tail_block < mass_tol {
        // Leftover unseen mass is below tolerance; emit it as one lump so
        // the weights still sum to one.
        if tail_block > 0.0 {
            weights.push(tail_block);
        }
        return Ok(weights);
    }
    let mut sticks = StickBreaking::new(params.shifted(t), rng);
    let mut drawn = 0;
    while tail_block * sticks.residual() >= mass_tol {
        if drawn >= STICK_CAP {
            return Err(Error::StickCapReached { cap: STICK_CAP, residual: tail_block * sticks.residual() });
        }
        weights.push(tail_block * sticks.next().expect("infinite iterator"));
        drawn += 1;
    }
    Ok(weights)
}
