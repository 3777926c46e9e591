use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pyent::sim::{run_scenario, EstimatorSpec, PopulationSpec, ScenarioConfig};
use pyent::{chao_shen_entropy, mle_entropy, mpy_entropy, mpy_entropy_auto, proposed_entropy, select_params, PyParams, SelectionConfig, DEFAULT_TRUNCATION};
use pyent_bench::standard_samples;

fn estimators(c: &mut Criterion) {
    let cfg = SelectionConfig::default();
    let mut group = c.benchmark_group("estimators");
    for (name, y) in standard_samples() {
        group.bench_with_input(BenchmarkId::new("mle", name), &y, |b, y| b.iter(|| mle_entropy(black_box(y))));
        group.bench_with_input(BenchmarkId::new("chao_shen", name), &y, |b, y| b.iter(|| chao_shen_entropy(black_box(y))));
        group.bench_with_input(BenchmarkId::new("select", name), &y, |b, y| b.iter(|| select_params(black_box(y), &cfg)));
        group.bench_with_input(BenchmarkId::new("proposed", name), &y, |b, y| {
            b.iter(|| proposed_entropy(black_box(y), &cfg, DEFAULT_TRUNCATION).unwrap())
        });
    }
    group.finish();
}

fn marginal_entropy(c: &mut Criterion) {
    let mut group = c.benchmark_group("mpy_entropy");
    for &(d, alpha) in &[(0.5, 1.0), (0.75, 2.0), (0.5, 500.0)] {
        let p = PyParams::new(d, alpha).unwrap();
        let id = format!("d{d}_a{alpha}");
        group.bench_function(BenchmarkId::new("fixed_n", &id), |b| b.iter(|| mpy_entropy(black_box(&p), DEFAULT_TRUNCATION).unwrap()));
        group.bench_function(BenchmarkId::new("auto", &id), |b| b.iter(|| mpy_entropy_auto(black_box(&p), DEFAULT_TRUNCATION).unwrap()));
    }
    group.finish();
}

fn harness(c: &mut Criterion) {
    let cfg = ScenarioConfig {
        id: "bench".into(),
        population: PopulationSpec::dirichlet_symmetric(0.1, 5000),
        sample_sizes: vec![100],
        replications: 20,
        master_seed: 1,
        estimators: vec![EstimatorSpec::Mle, EstimatorSpec::MillerMadow, EstimatorSpec::ChaoShen, EstimatorSpec::Proposed],
        selection: SelectionConfig::default(),
        truncation_n: DEFAULT_TRUNCATION,
    };
    let mut group = c.benchmark_group("harness");
    group.sample_size(10);
    group.bench_function("scenario_k5000_n100_r20", |b| b.iter(|| run_scenario(black_box(&cfg)).unwrap()));
    group.finish();
}

criterion_group!(benches, estimators, marginal_entropy, harness);
criterion_main!(benches);
