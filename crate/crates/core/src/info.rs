//! Finite-dimensional information measures in nats.
//!
//! Vectors are validated once at construction; the measures themselves only
//! read them. All sums are compensated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::compensated_sum;

/// Absolute tolerance on `|Σ p_i - 1|`.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// KL values in `[-KL_CLAMP, 0)` are reported as exactly zero.
pub const KL_CLAMP: f64 = 1e-10;

fn check_normalized(probs: &[f64], strict: bool) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::EmptyVector);
    }
    for (index, &value) in probs.iter().enumerate() {
        let ok = value.is_finite() && if strict { value > 0.0 } else { value >= 0.0 };
        if !ok {
            return Err(Error::InvalidProbability { index, value });
        }
    }
    let total = compensated_sum(probs.iter().copied());
    if (total - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::NotNormalized(total));
    }
    Ok(())
}

/// A probability vector with strictly positive entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        check_normalized(&probs, true)?;
        Ok(Self(probs))
    }

    /// Normalizes positive weights into a probability vector.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let total = compensated_sum(weights.iter().copied());
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::InvalidArgument(format!("weights sum to {total}")));
        }
        Self::new(weights.iter().map(|w| w / total).collect())
    }

    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::EmptyVector);
        }
        Self::new(vec![1.0 / k as f64; k])
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entropy(&self) -> f64 {
        entropy_of(&self.0)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for ProbabilityVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ProbabilityVector> for Vec<f64> {
    fn from(p: ProbabilityVector) -> Self {
        p.0
    }
}

/// A probability vector that may contain zeros (`0 log 0 = 0`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ExtendedProbabilityVector(Vec<f64>);

impl ExtendedProbabilityVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        check_normalized(&probs, false)?;
        Ok(Self(probs))
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<ProbabilityVector> for ExtendedProbabilityVector {
    fn from(p: ProbabilityVector) -> Self {
        Self(p.0)
    }
}

impl TryFrom<Vec<f64>> for ExtendedProbabilityVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ExtendedProbabilityVector> for Vec<f64> {
    fn from(p: ExtendedProbabilityVector) -> Self {
        p.0
    }
}

/// `-x log x` with the continuous extension at zero.
#[inline]
pub(crate) fn neg_x_log_x(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.ln()
    } else {
        0.0
    }
}

/// Entropy of an arbitrary nonnegative slice, without validation.
pub(crate) fn entropy_of(probs: &[f64]) -> f64 {
    compensated_sum(probs.iter().map(|&x| neg_x_log_x(x))).max(0.0)
}

/// Shannon entropy `-Σ p_i log p_i` in nats.
pub fn shannon_entropy(p: &ExtendedProbabilityVector) -> f64 {
    entropy_of(&p.0)
}

fn check_prefix(p: &ProbabilityVector, q: &[f64]) -> Result<()> {
    if q.len() < p.len() {
        return Err(Error::PrefixTooShort { p_len: p.len(), q_len: q.len() });
    }
    for (index, &value) in q.iter().enumerate() {
        if !(value.is_finite() && (0.0..=1.0).contains(&value)) {
            return Err(Error::InvalidProbability { index, value });
        }
    }
    let total = compensated_sum(q.iter().copied());
    if total > 1.0 + SUM_TOLERANCE {
        return Err(Error::NotNormalized(total));
    }
    Ok(())
}

/// Cross entropy `-Σ_i p_i log q_i`.
///
/// `q` may be the head of a longer (even infinite) probability vector; only
/// its first `p.len()` entries are read, but the whole slice must carry at
/// most unit mass.
pub fn cross_entropy(p: &ProbabilityVector, q: &[f64]) -> Result<f64> {
    check_prefix(p, q)?;
    let mut terms = Vec::with_capacity(p.len());
    for (index, (&pi, &qi)) in p.0.iter().zip(q).enumerate() {
        if qi == 0.0 {
            return Err(Error::InfiniteCrossEntropy { index });
        }
        terms.push(-pi * qi.ln());
    }
    Ok(compensated_sum(terms))
}

/// Kullback-Leibler divergence `D(p || q) = H(p, q) - H(p)`.
pub fn kl_divergence(p: &ProbabilityVector, q: &[f64]) -> Result<f64> {
    let kl = cross_entropy(p, q)? - p.entropy();
    if kl < 0.0 && kl >= -KL_CLAMP {
        Ok(0.0)
    } else {
        Ok(kl)
    }
}
