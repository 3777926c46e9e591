use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::mpy::{PyParams, DEFAULT_TRUNCATION};
use crate::selection::SelectionConfig;
use crate::sim::population::PopulationSpec;

/// An estimator evaluated by the harness.
///
/// In JSON the parameter-free estimators are bare strings (`"mle"`) and the
/// fixed-parameter DPYM is `{"dpym_fixed": {"d": 0.5, "alpha": 0}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorSpec {
    Mle,
    MillerMadow,
    ChaoShen,
    DpymFixed { d: f64, alpha: f64 },
    Proposed,
}

impl EstimatorSpec {
    pub fn validate(&self) -> Result<()> {
        if let EstimatorSpec::DpymFixed { d, alpha } = *self {
            PyParams::new(d, alpha)?;
        }
        Ok(())
    }
}

impl fmt::Display for EstimatorSpec {
    /// Label used in the result table.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EstimatorSpec::Mle => f.write_str("mle"),
            EstimatorSpec::MillerMadow => f.write_str("miller_madow"),
            EstimatorSpec::ChaoShen => f.write_str("chao_shen"),
            EstimatorSpec::DpymFixed { d, alpha } => write!(f, "dpym_fixed(d={d},alpha={alpha})"),
            EstimatorSpec::Proposed => f.write_str("proposed"),
        }
    }
}

fn default_truncation() -> usize {
    DEFAULT_TRUNCATION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub id: String,
    pub population: PopulationSpec,
    pub sample_sizes: Vec<u64>,
    pub replications: usize,
    pub master_seed: u64,
    pub estimators: Vec<EstimatorSpec>,
    #[serde(default)]
    pub selection: SelectionConfig,
    #[serde(default = "default_truncation")]
    pub truncation_n: usize,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(format!("scenario {:?}: {msg}", self.id)));
        if self.id.is_empty() {
            return bad("id must be non-empty".into());
        }
        self.population.validate()?;
        if self.sample_sizes.is_empty() || self.sample_sizes.contains(&0) {
            return bad("sample_sizes must be a non-empty list of positive integers".into());
        }
        if self.replications == 0 {
            return bad("replications must be positive".into());
        }
        if self.estimators.is_empty() {
            return bad("estimators must be non-empty".into());
        }
        for e in &self.estimators {
            e.validate()?;
        }
        self.selection.validate()?;
        if self.truncation_n == 0 {
            return bad("truncation_n must be positive".into());
        }
        Ok(())
    }
}

/// A list of scenarios run in order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub scenarios: Vec<ScenarioConfig>,
}

impl SimulationConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.scenarios.is_empty() {
            return Err(Error::InvalidArgument("config has no scenarios".into()));
        }
        let mut ids = HashSet::new();
        for s in &self.scenarios {
            s.validate()?;
            if !ids.insert(s.id.as_str()) {
                return Err(Error::InvalidArgument(format!("duplicate scenario id {:?}", s.id)));
            }
        }
        Ok(())
    }

    /// Total number of (scenario, N, replication) tasks.
    pub fn task_count(&self) -> usize {
        self.scenarios.iter().map(|s| s.sample_sizes.len() * s.replications).sum()
    }
}
