use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::ProbabilityVector;

/// Family of true populations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PopulationKind {
    DirichletSymmetric { a: f64 },
    /// The first `ceil(K/2)` coordinates use `a_low`, the rest `a_high`.
    DirichletMixed { a_low: f64, a_high: f64 },
    /// Deterministic `p_k ∝ k^(-s)`; `s = 0` is the uniform distribution.
    Zipf { s: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationSpec {
    #[serde(flatten)]
    pub kind: PopulationKind,
    #[serde(rename = "K")]
    pub k: usize,
}

impl PopulationSpec {
    pub fn dirichlet_symmetric(a: f64, k: usize) -> Self {
        Self { kind: PopulationKind::DirichletSymmetric { a }, k }
    }

    pub fn dirichlet_mixed(a_low: f64, a_high: f64, k: usize) -> Self {
        Self { kind: PopulationKind::DirichletMixed { a_low, a_high }, k }
    }

    pub fn zipf(s: f64, k: usize) -> Self {
        Self { kind: PopulationKind::Zipf { s }, k }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        let ok = match self.kind {
            PopulationKind::DirichletSymmetric { a } => positive(a),
            PopulationKind::DirichletMixed { a_low, a_high } => positive(a_low) && positive(a_high),
            PopulationKind::Zipf { s } => s >= 0.0 && s.is_finite(),
        };
        if !ok {
            return Err(Error::InvalidArgument(format!("invalid population parameters {:?}", self.kind)));
        }
        if self.k == 0 {
            return Err(Error::InvalidArgument("population size K must be positive".into()));
        }
        Ok(())
    }

    /// Whether generating a population consumes randomness.
    pub fn is_random(&self) -> bool {
        !matches!(self.kind, PopulationKind::Zipf { .. })
    }
}

fn gamma_draw<R: Rng + ?Sized>(dist: &Gamma<f64>, rng: &mut R) -> f64 {
    // Small shapes can underflow; keep every coordinate strictly positive.
    dist.sample(rng).max(f64::MIN_POSITIVE)
}

pub fn gen_population<R: Rng + ?Sized>(spec: &PopulationSpec, rng: &mut R) -> Result<ProbabilityVector> {
    spec.validate()?;
    let k = spec.k;
    let weights: Vec<f64> = match spec.kind {
        PopulationKind::DirichletSymmetric { a } => {
            let g = Gamma::new(a, 1.0).expect("validated shape");
            (0..k).map(|_| gamma_draw(&g, rng)).collect()
        }
        PopulationKind::DirichletMixed { a_low, a_high } => {
            let low = Gamma::new(a_low, 1.0).expect("validated shape");
            let high = Gamma::new(a_high, 1.0).expect("validated shape");
            let split = k.div_ceil(2);
            (0..k).map(|i| gamma_draw(if i < split { &low } else { &high }, rng)).collect()
        }
        PopulationKind::Zipf { s } => (1..=k).map(|i| (i as f64).powf(-s)).collect(),
    };
    ProbabilityVector::from_weights(&weights)
}
