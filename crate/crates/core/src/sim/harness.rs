use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::io;

use crate::classical::{chao_shen_entropy, mle_entropy, miller_madow_entropy, FrequencyVector};
use crate::dpym::dpym_entropy;
use crate::error::Result;
use crate::estimate::proposed_entropy;
use crate::format::fmt15;
use crate::mpy::PyParams;
use crate::selection::SelectionConfig;
use crate::sim::config::{EstimatorSpec, ScenarioConfig, SimulationConfig};
use crate::sim::population::gen_population;
use crate::sim::sampling::sample_labeled;
use crate::sum::CompensatedSum;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Seed of the stream for replication `r` at sample size `n`.
///
/// Each input is folded in through a splitmix64 finalizer, so nearby
/// `(n, r)` pairs get unrelated streams.
pub fn replication_seed(master_seed: u64, scenario_id: &str, n: u64, r: u64) -> u64 {
    let mut h = splitmix64(master_seed);
    h = splitmix64(h ^ fnv1a(scenario_id.as_bytes()));
    h = splitmix64(h ^ n);
    splitmix64(h ^ r)
}

/// Estimate from one estimator on one sample.
pub fn evaluate_estimator(spec: &EstimatorSpec, y: &FrequencyVector, selection: &SelectionConfig, truncation_n: usize) -> Result<f64> {
    Ok(match *spec {
        EstimatorSpec::Mle => mle_entropy(y).value,
        EstimatorSpec::MillerMadow => miller_madow_entropy(y).value,
        EstimatorSpec::ChaoShen => chao_shen_entropy(y).value,
        EstimatorSpec::DpymFixed { d, alpha } => dpym_entropy(y, &PyParams::new(d, alpha)?, truncation_n)?.value,
        EstimatorSpec::Proposed => proposed_entropy(y, selection, truncation_n)?.value,
    })
}

/// Errors `Ĥ - H(p)` of every estimator on replication `r`; `None` marks a
/// failed evaluation.
fn replicate(cfg: &ScenarioConfig, n: u64, r: usize) -> Vec<Option<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(replication_seed(cfg.master_seed, &cfg.id, n, r as u64));
    let Ok(p) = gen_population(&cfg.population, &mut rng) else {
        return vec![None; cfg.estimators.len()];
    };
    let truth = p.entropy();
    let Ok(sample) = sample_labeled(&p, n, &mut rng) else {
        return vec![None; cfg.estimators.len()];
    };
    let y = sample.frequency_vector();
    cfg.estimators
        .iter()
        .map(|e| evaluate_estimator(e, &y, &cfg.selection, cfg.truncation_n).ok().map(|h| h - truth))
        .collect()
}

/// One `(scenario, N, method)` cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub scenario: String,
    #[serde(rename = "N")]
    pub n: u64,
    pub method: String,
    pub mse: Option<f64>,
    pub bias: Option<f64>,
    pub variance: Option<f64>,
    /// Replications that produced an estimate.
    pub reps: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct SimulationResult {
    pub rows: Vec<ResultRow>,
}

/// Mean squared error, bias and population variance of a set of errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSummary {
    pub mse: f64,
    pub bias: f64,
    pub variance: f64,
}

pub fn summarize_errors(errors: &[f64]) -> Option<ErrorSummary> {
    if errors.is_empty() {
        return None;
    }
    let m = errors.len() as f64;
    let bias = errors.iter().copied().collect::<CompensatedSum>().value() / m;
    let mse = errors.iter().map(|e| e * e).collect::<CompensatedSum>().value() / m;
    let variance = errors.iter().map(|e| (e - bias) * (e - bias)).collect::<CompensatedSum>().value() / m;
    Some(ErrorSummary { mse, bias, variance })
}

/// Runs every replication of a scenario and aggregates per `(N, method)`.
///
/// Replications run in parallel on the current rayon pool; aggregation
/// follows the canonical `(N, method, r)` order so the output does not
/// depend on the thread count.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<SimulationResult> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.sample_sizes.len() * cfg.estimators.len());
    for &n in &cfg.sample_sizes {
        let per_rep: Vec<Vec<Option<f64>>> = (0..cfg.replications).into_par_iter().map(|r| replicate(cfg, n, r)).collect();
        for (j, spec) in cfg.estimators.iter().enumerate() {
            let errors: Vec<f64> = per_rep.iter().filter_map(|v| v[j]).collect();
            let summary = summarize_errors(&errors);
            rows.push(ResultRow {
                scenario: cfg.id.clone(),
                n,
                method: spec.to_string(),
                mse: summary.map(|s| s.mse),
                bias: summary.map(|s| s.bias),
                variance: summary.map(|s| s.variance),
                reps: errors.len(),
                seed: cfg.master_seed,
            });
        }
    }
    Ok(SimulationResult { rows })
}

/// Runs all scenarios in order.
pub fn run_simulation(cfg: &SimulationConfig) -> Result<SimulationResult> {
    cfg.validate()?;
    let mut out = SimulationResult::default();
    for s in &cfg.scenarios {
        out.rows.extend(run_scenario(s)?.rows);
    }
    Ok(out)
}

pub const CSV_HEADER: [&str; 8] = ["scenario", "N", "method", "mse", "bias", "variance", "reps", "seed"];

impl SimulationResult {
    /// RFC 4180 CSV; failed cells are empty fields.
    pub fn write_csv<W: io::Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
        w.write_record(CSV_HEADER)?;
        let num = |v: Option<f64>| v.map(fmt15).unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                r.scenario.clone(),
                r.n.to_string(),
                r.method.clone(),
                num(r.mse),
                num(r.bias),
                num(r.variance),
                r.reps.to_string(),
                r.seed.to_string(),
            ])?;
        }
        w.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8")
    }

    pub fn row(&self, scenario: &str, n: u64, method: &str) -> Option<&ResultRow> {
        self.rows.iter().find(|r| r.scenario == scenario && r.n == n && r.method == method)
    }
}
