//! Monte Carlo comparison of entropy estimators on simulated populations.

pub mod config;
pub mod curves;
pub mod harness;
pub mod population;
pub mod sampling;

pub use config::{EstimatorSpec, ScenarioConfig, SimulationConfig};
pub use curves::{curve_sweep, log_grid, CurveRow};
pub use harness::{evaluate_estimator, replication_seed, run_scenario, run_simulation, summarize_errors, ErrorSummary, ResultRow, SimulationResult, CSV_HEADER};
pub use population::{gen_population, PopulationKind, PopulationSpec};
pub use sampling::{sample_counts, sample_labeled, LabeledSample};
