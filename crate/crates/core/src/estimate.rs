//! Common result type for every entropy estimator, and the proposed estimator.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::classical::FrequencyVector;
use crate::dpym::dpym_entropy;
use crate::error::Result;
use crate::mpy::PyParams;
use crate::selection::{select_params, SelectionConfig, SelectionDiagnostics};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Mle,
    MillerMadow,
    ChaoShen,
    DpymFixed,
    Proposed,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Mle => "mle",
            Method::MillerMadow => "miller_madow",
            Method::ChaoShen => "chao_shen",
            Method::DpymFixed => "dpym_fixed",
            Method::Proposed => "proposed",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An entropy estimate in nats. `params_used` is set exactly for the
/// DPYM-based methods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyEstimate {
    pub value: f64,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub params_used: Option<PyParams>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub truncation_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub remainder_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub selection: Option<SelectionDiagnostics>,
}

impl EntropyEstimate {
    pub(crate) fn plain(method: Method, value: f64) -> Self {
        Self { value, method, params_used: None, truncation_n: None, remainder_bound: None, selection: None }
    }
}

/// The proposed estimator: select `(d, alpha)` by minimizing the estimated
/// cross-entropy bound, then report the DPYM predictive entropy there.
pub fn proposed_entropy(y: &FrequencyVector, cfg: &SelectionConfig, truncation_n: usize) -> Result<EntropyEstimate> {
    let (params, diagnostics) = select_params(y, cfg);
    let mut estimate = dpym_entropy(y, &params, truncation_n)?;
    estimate.method = Method::Proposed;
    estimate.selection = Some(diagnostics);
    Ok(estimate)
}
