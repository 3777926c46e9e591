//! Fixtures shared by the benchmarks.

use pyent::sim::{gen_population, sample_counts, PopulationSpec};
use pyent::FrequencyVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A sample of size `n` from a fixed `Dirichlet_K(a)` population.
pub fn dirichlet_sample(a: f64, k: usize, n: u64, seed: u64) -> FrequencyVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = gen_population(&PopulationSpec::dirichlet_symmetric(a, k), &mut rng).expect("valid population");
    sample_counts(&p, n, &mut rng).expect("n > 0")
}

/// Samples used across the estimator benchmarks: sparse and saturated.
pub fn standard_samples() -> Vec<(&'static str, FrequencyVector)> {
    vec![
        ("sparse_k5000_n100", dirichlet_sample(0.1, 5000, 100, 1)),
        ("dense_k5000_n1000", dirichlet_sample(1.0, 5000, 1000, 2)),
        ("saturated_k5000_n20000", dirichlet_sample(1.0, 5000, 20_000, 3)),
    ]
}
