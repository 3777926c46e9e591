use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::classical::FrequencyVector;
use crate::error::{Error, Result};
use crate::info::ProbabilityVector;

/// Multinomial counts that remember which species each belongs to.
///
/// Estimators only ever see [`LabeledSample::frequency_vector`]; the labels
/// exist so that true unseen masses and the alignment between `p` and the
/// predictive vector can be computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledSample {
    counts: Vec<u64>,
    sample_size: u64,
}

impl LabeledSample {
    pub fn from_counts(counts: Vec<u64>) -> Result<Self> {
        let sample_size = counts.iter().sum();
        if sample_size == 0 {
            return Err(Error::NoObservations);
        }
        Ok(Self { counts, sample_size })
    }

    /// Count per population species, zeros included.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn sample_size(&self) -> u64 {
        self.sample_size
    }

    /// Positive counts in species order.
    pub fn frequency_vector(&self) -> FrequencyVector {
        FrequencyVector::from_unsigned(&self.counts).expect("sample has at least one observation")
    }

    /// True mass of the species never observed.
    pub fn unseen_mass(&self, p: &ProbabilityVector) -> f64 {
        self.mass_where(p, |c| c == 0)
    }

    /// True mass of the species observed exactly once.
    pub fn singleton_mass(&self, p: &ProbabilityVector) -> f64 {
        self.mass_where(p, |c| c == 1)
    }

    fn mass_where(&self, p: &ProbabilityVector, keep: impl Fn(u64) -> bool) -> f64 {
        crate::sum::compensated_sum(self.counts.iter().zip(p.probs()).filter(|(&c, _)| keep(c)).map(|(_, &q)| q))
    }

    /// `p` rearranged to line up with the DPYM predictive vector: observed
    /// species in the order of [`Self::frequency_vector`], then the unseen
    /// species by decreasing probability.
    pub fn aligned_population(&self, p: &ProbabilityVector) -> ProbabilityVector {
        let mut seen = Vec::new();
        let mut unseen = Vec::new();
        for (&c, &q) in self.counts.iter().zip(p.probs()) {
            if c > 0 {
                seen.push(q);
            } else {
                unseen.push(q);
            }
        }
        unseen.sort_by(|a, b| b.total_cmp(a));
        seen.extend(unseen);
        ProbabilityVector::new(seen).expect("permutation of a probability vector")
    }
}

/// `n` categorical draws from `p`, keeping labels.
///
/// Draws one category at a time by inverting the cumulative distribution when
/// `n < K`, and otherwise splits `n` by sequential conditional binomials.
pub fn sample_labeled<R: Rng + ?Sized>(p: &ProbabilityVector, n: u64, rng: &mut R) -> Result<LabeledSample> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample size must be positive".into()));
    }
    let probs = p.probs();
    let k = probs.len();
    let mut counts = vec![0u64; k];
    if (n as usize) < k {
        let mut cumulative = Vec::with_capacity(k);
        let mut acc = crate::sum::CompensatedSum::new();
        for &q in probs {
            acc.add(q);
            cumulative.push(acc.value());
        }
        let total = *cumulative.last().expect("non-empty");
        for _ in 0..n {
            let u = rng.random::<f64>() * total;
            let i = cumulative.partition_point(|&c| c <= u).min(k - 1);
            counts[i] += 1;
        }
    } else {
        // Mass remaining from index i onward.
        let mut suffix = vec![0.0; k + 1];
        for i in (0..k).rev() {
            suffix[i] = suffix[i + 1] + probs[i];
        }
        let mut left = n;
        for i in 0..k {
            if left == 0 {
                break;
            }
            if i == k - 1 {
                counts[i] = left;
                break;
            }
            let q = (probs[i] / suffix[i]).clamp(0.0, 1.0);
            let c = Binomial::new(left, q).expect("probability in [0, 1]").sample(rng);
            counts[i] = c;
            left -= c;
        }
    }
    LabeledSample::from_counts(counts)
}

/// `n` categorical draws from `p`, returned as unlabeled positive counts.
pub fn sample_counts<R: Rng + ?Sized>(p: &ProbabilityVector, n: u64, rng: &mut R) -> Result<FrequencyVector> {
    Ok(sample_labeled(p, n, rng)?.frequency_vector())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn degenerate_population() {
        let p = ProbabilityVector::new(vec![1.0]).unwrap();
        let y = sample_counts(&p, 7, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(y.counts(), &[7]);
    }

    #[test]
    fn counts_sum_to_n_in_both_regimes() {
        let p = ProbabilityVector::from_weights(&[5.0, 1.0, 1.0, 3.0, 0.5]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1u64, 3, 4, 5, 6, 100, 12345] {
            let s = sample_labeled(&p, n, &mut rng).unwrap();
            assert_eq!(s.counts().iter().sum::<u64>(), n);
            assert_eq!(s.frequency_vector().sample_size(), n);
        }
    }

    #[test]
    fn labeled_masses_and_alignment() {
        let p = ProbabilityVector::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let s = LabeledSample::from_counts(vec![0, 1, 0, 5]).unwrap();
        assert!((s.unseen_mass(&p) - 0.4).abs() < 1e-15);
        assert!((s.singleton_mass(&p) - 0.2).abs() < 1e-15);
        assert_eq!(s.aligned_population(&p).probs(), &[0.2, 0.4, 0.3, 0.1]);
        assert_eq!(s.frequency_vector().counts(), &[1, 5]);
    }

    #[test]
    fn empirical_frequencies_pass_chi_square() {
        let w: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        let p = ProbabilityVector::from_weights(&w).unwrap();
        let n = 1_000_000u64;
        for seed in [10u64, 11] {
            let s = sample_labeled(&p, n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            let stat: f64 = s
                .counts()
                .iter()
                .zip(p.probs())
                .map(|(&c, &q)| {
                    let e = q * n as f64;
                    (c as f64 - e).powi(2) / e
                })
                .sum();
            // Upper 0.001 point of chi-square with 9 degrees of freedom.
            assert!(stat < 27.877, "{stat}");
        }
        // Categorical regime.
        let p = ProbabilityVector::uniform(1000).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut total = vec![0u64; 1000];
        for _ in 0..2000 {
            let s = sample_labeled(&p, 500, &mut rng).unwrap();
            for (t, c) in total.iter_mut().zip(s.counts()) {
                *t += c;
            }
        }
        let e = 1000.0;
        let stat: f64 = total.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
        // Upper 0.001 point of chi-square with 999 degrees of freedom.
        assert!(stat < 1142.85, "{stat}");
    }
}
