//! Observed frequency vectors, plug-in baselines and Good-Turing coverage.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{EntropyEstimate, Method};
use crate::info::neg_x_log_x;
use crate::sum::compensated_sum;

/// Unlabeled sample: one positive count per observed species.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyVector {
    counts: Vec<u64>,
    sample_size: u64,
    singletons: usize,
    #[serde(default)]
    zeros_dropped: usize,
}

impl FrequencyVector {
    /// Builds a vector from strictly positive counts.
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if let Some(index) = counts.iter().position(|&c| c == 0) {
            return Err(Error::InvalidArgument(format!("count at index {index} is zero")));
        }
        if counts.is_empty() {
            return Err(Error::NoObservations);
        }
        let sample_size = counts.iter().sum();
        let singletons = counts.iter().filter(|&&c| c == 1).count();
        Ok(Self { counts, sample_size, singletons, zeros_dropped: 0 })
    }

    /// Builds a vector from nonnegative counts, dropping zeros.
    pub fn from_unsigned(raw: &[u64]) -> Result<Self> {
        let counts: Vec<u64> = raw.iter().copied().filter(|&c| c > 0).collect();
        let dropped = raw.len() - counts.len();
        let mut y = Self::new(counts)?;
        y.zeros_dropped = dropped;
        Ok(y)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Sample size `N`.
    pub fn sample_size(&self) -> u64 {
        self.sample_size
    }

    /// Number of observed species `T`.
    pub fn observed_species(&self) -> usize {
        self.counts.len()
    }

    /// Number of species seen exactly once, `m1`.
    pub fn singletons(&self) -> usize {
        self.singletons
    }

    /// Singleton count used by the coverage formulas: `m1`, or `N - 1` when
    /// every individual is a singleton.
    pub fn clamped_singletons(&self) -> u64 {
        let m1 = self.singletons as u64;
        if m1 == self.sample_size {
            m1 - 1
        } else {
            m1
        }
    }

    /// Zero entries discarded while parsing raw counts.
    pub fn zeros_dropped(&self) -> usize {
        self.zeros_dropped
    }
}

/// Parses raw counts; zeros mark unobserved labels and are dropped.
pub fn frequency_from_counts(raw: &[i64]) -> Result<FrequencyVector> {
    let mut unsigned = Vec::with_capacity(raw.len());
    for (index, &value) in raw.iter().enumerate() {
        if value < 0 {
            return Err(Error::NegativeCount { index, value });
        }
        unsigned.push(value as u64);
    }
    FrequencyVector::from_unsigned(&unsigned)
}

fn plug_in_entropy(y: &FrequencyVector) -> f64 {
    let n = y.sample_size as f64;
    compensated_sum(y.counts.iter().map(|&c| neg_x_log_x(c as f64 / n))).max(0.0)
}

/// Plug-in maximum likelihood entropy.
pub fn mle_entropy(y: &FrequencyVector) -> EntropyEstimate {
    EntropyEstimate::plain(Method::Mle, plug_in_entropy(y))
}

/// MLE plus the `(T - 1) / 2N` bias correction.
pub fn miller_madow_entropy(y: &FrequencyVector) -> EntropyEstimate {
    let correction = (y.observed_species() as f64 - 1.0) / (2.0 * y.sample_size as f64);
    EntropyEstimate::plain(Method::MillerMadow, plug_in_entropy(y) + correction)
}

/// Coverage-adjusted probabilities `(1 - m1'/N) n_i / N`.
///
/// The entries sum to the estimated coverage, not to one.
pub fn good_turing_probs(y: &FrequencyVector) -> Vec<f64> {
    let n = y.sample_size as f64;
    let coverage = 1.0 - y.clamped_singletons() as f64 / n;
    y.counts.iter().map(|&c| coverage * (c as f64 / n)).collect()
}

/// Chao-Shen: Horvitz-Thompson weighting of the Good-Turing plug-in.
pub fn chao_shen_entropy(y: &FrequencyVector) -> EntropyEstimate {
    let n = y.sample_size as f64;
    let value = compensated_sum(good_turing_probs(y).into_iter().map(|p| {
        // 1 - (1 - p)^N without cancellation.
        let inclusion = -(n * (-p).ln_1p()).exp_m1();
        neg_x_log_x(p) / inclusion
    }));
    EntropyEstimate::plain(Method::ChaoShen, value.max(0.0))
}

/// Good-Turing plug-ins for the unseen mass, singleton mass and richness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageEstimates {
    pub c0_hat: f64,
    pub c1_hat: f64,
    pub c01_hat: f64,
    pub k_hat: f64,
    pub f_hat: f64,
}

pub fn coverage_estimates(y: &FrequencyVector) -> CoverageEstimates {
    let n = y.sample_size as f64;
    let t = y.observed_species() as f64;
    let ratio = y.clamped_singletons() as f64 / n;
    let c0_hat = ratio;
    let c1_hat = (1.0 - c0_hat) * ratio;
    let k_hat = n / (1.0 - c0_hat);
    // K_hat >= N >= T, so the floor never binds for a valid FrequencyVector.
    let f_hat = (0.5 * c0_hat * (k_hat - t + 1.0)).max(0.0);
    CoverageEstimates { c0_hat, c1_hat, c01_hat: c0_hat + c1_hat, k_hat, f_hat }
}
