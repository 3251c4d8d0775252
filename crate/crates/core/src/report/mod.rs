//! Run configuration, the four batch commands and their CSV/JSON reports.

mod commands;
mod config;
mod output;

use thiserror::Error;

use crate::eigen::EigenError;
use crate::fock::FockError;
use crate::metric::MetricError;
use crate::oscillator::ModelError;
use crate::poschl_teller::PtError;
use crate::tolerances::ToleranceError;

pub use commands::{
    cmd_converge, cmd_metric, cmd_probability, cmd_spectrum, convergence_study, random_state, run, ConvergenceReport,
    MAX_DENSE_GRID,
};
pub use config::{Command, ModelKind, OutputFormat, ResolvedConfig, RunConfig, StateSpec};
pub use output::{Cell, Report, Section};

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl ReportError {
    /// Process exit code; unusable paths count as invalid input.
    pub fn exit_code(&self) -> i32 {
        match self {
            ReportError::Numerical(_) => EXIT_NUMERICAL,
            ReportError::Validation(_) | ReportError::Io { .. } => EXIT_VALIDATION,
        }
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        ReportError::Validation(msg.into())
    }
}

impl From<ToleranceError> for ReportError {
    fn from(e: ToleranceError) -> Self {
        ReportError::Validation(e.to_string())
    }
}

impl From<FockError> for ReportError {
    fn from(e: FockError) -> Self {
        match e {
            FockError::BasisTooSmall { .. } | FockError::InvalidGrid(_) => ReportError::Validation(e.to_string()),
            _ => ReportError::Numerical(e.to_string()),
        }
    }
}

impl From<ModelError> for ReportError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Fock(f) => f.into(),
            ModelError::Domain { .. } => ReportError::Numerical(e.to_string()),
            _ => ReportError::Validation(e.to_string()),
        }
    }
}

impl From<EigenError> for ReportError {
    fn from(e: EigenError) -> Self {
        ReportError::Numerical(e.to_string())
    }
}

impl From<PtError> for ReportError {
    fn from(e: PtError) -> Self {
        match e {
            PtError::Fock(f) => f.into(),
            PtError::Eigen(g) => g.into(),
            _ => ReportError::Validation(e.to_string()),
        }
    }
}

impl From<MetricError> for ReportError {
    fn from(e: MetricError) -> Self {
        match e {
            MetricError::Model(m) => m.into(),
            MetricError::Pt(p) => p.into(),
            MetricError::Fock(f) => f.into(),
            MetricError::StateLength { .. } => ReportError::Validation(e.to_string()),
            _ => ReportError::Numerical(e.to_string()),
        }
    }
}
