//! Involutions `J`, metrics `Q`, pseudo-Hermiticity residuals, the
//! biorthogonal metric, Hermitian counterparts and transition probabilities.

mod biorthogonal;
mod hermitize;
mod involution;
mod probability;
mod verify;

use serde::Serialize;
use thiserror::Error;

use crate::eigen::EigenError;
use crate::fock::{FockError, OperatorMatrix};
use crate::oscillator::ModelError;
use crate::poschl_teller::PtError;

pub use biorthogonal::{
    involution_normalized_real_pairs, metric_from_biorthogonal, scale_matched_difference, BiorthogonalMetric,
    ScaleMatch,
};
pub use hermitize::{hermitize, hermitize_with_log, Hermitized};
pub use involution::{build_involution, closed_form_log_q, closed_form_metric, expected_eta};
pub use probability::{involution_amplitudes, transition_probability, ProbabilityReport};
pub use verify::{eta_signature, verify_metric, window_residual_qh};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Pt(#[from] PtError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error("J-orthogonality failure: |⟨R_{i}|J|R_{j}⟩| = {value:e}")]
    JOrthogonality { i: usize, j: usize, value: f64 },
    #[error("biorthogonal metric is not positive definite (minimum eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("metric assembly asymmetry {asymmetry:e} exceeds {limit:e}")]
    Asymmetric { asymmetry: f64, limit: f64 },
    #[error("state has non-positive metric norm {value:e}")]
    NonPositiveNorm { value: f64 },
    #[error("state length {state} does not match dimension {dim}")]
    StateLength { state: usize, dim: usize },
    #[error("no involution is defined for this model")]
    NoInvolution,
}

/// Involution, metric and the residuals tying them to a Hamiltonian.
#[derive(Debug, Clone, Serialize)]
pub struct MetricPair {
    #[serde(skip)]
    pub j: Option<OperatorMatrix>,
    #[serde(skip)]
    pub q: OperatorMatrix,
    #[serde(skip)]
    pub log_q: Option<OperatorMatrix>,
    pub residual_jh: Option<f64>,
    pub residual_qh: Option<f64>,
    pub residual_bender: Option<f64>,
    pub residual_jqj: Option<f64>,
    pub eta: Vec<i8>,
    pub window: usize,
}

impl MetricPair {
    pub fn new(j: Option<OperatorMatrix>, q: OperatorMatrix, log_q: Option<OperatorMatrix>) -> Self {
        let window = q.dim();
        Self {
            j,
            q,
            log_q,
            residual_jh: None,
            residual_qh: None,
            residual_bender: None,
            residual_jqj: None,
            eta: Vec::new(),
            window,
        }
    }
}
