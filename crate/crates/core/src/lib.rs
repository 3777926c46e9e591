//! Shannon entropy estimation with Pitman-Yor priors on the unseen species.
//!
//! The estimator places a Dirichlet-Pitman-Yor mixture on the observed
//! frequencies, picks its hyperparameters by minimizing an upper bound on the
//! cross entropy to the true distribution, and reports the entropy of the
//! resulting predictive vector. Plug-in baselines, the marginal Pitman-Yor
//! distribution and a simulation harness are included.

pub mod classical;
pub mod dpym;
pub mod error;
pub mod estimate;
pub mod format;
pub mod info;
pub mod mpy;
pub mod selection;
pub mod sim;
pub mod special;
pub mod sum;

pub use classical::{
    chao_shen_entropy, coverage_estimates, frequency_from_counts, good_turing_probs, miller_madow_entropy, mle_entropy, CoverageEstimates,
    FrequencyVector,
};
pub use dpym::{dpym_entropy, dpym_head_entropy, dpym_predictive, sample_dpym, DpymPredictive};
pub use error::{Error, Result};
pub use estimate::{proposed_entropy, EntropyEstimate, Method};
pub use info::{cross_entropy, kl_divergence, shannon_entropy, ExtendedProbabilityVector, ProbabilityVector};
pub use mpy::{
    mpy_entropy, mpy_entropy_auto, mpy_log_pmf, mpy_pmf, stick_breaking_sample, tail_ratio, MpyEntropyResult, PyParams, StickBreaking,
    DEFAULT_TRUNCATION,
};
pub use selection::{
    boundary_candidates, critical_candidates, estimated_upper_bound, face_candidate, select_params, upper_bound_f, Candidate, CandidateLabel, SelectionConfig,
    SelectionDiagnostics, SelectionRule,
};
