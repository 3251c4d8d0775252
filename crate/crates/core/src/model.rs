//! Tagged selector over every Hamiltonian family.

use serde::Serialize;

use crate::fock::{Basis, OperatorMatrix};
use crate::oscillator::OscillatorModel;
use crate::poschl_teller::{build_pt, pt_bound_spectrum, PoeschlTellerSpec, PtError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ModelSpec {
    Oscillator(OscillatorModel),
    PoeschlTeller(PoeschlTellerSpec),
}

impl ModelSpec {
    pub fn basis(&self) -> Basis {
        match self {
            Self::Oscillator(m) => m.basis().into(),
            Self::PoeschlTeller(s) => s.grid().into(),
        }
    }

    pub fn hamiltonian(&self) -> Result<OperatorMatrix, PtError> {
        match self {
            Self::Oscillator(m) => Ok(m.hamiltonian()),
            Self::PoeschlTeller(s) => build_pt(s),
        }
    }

    /// Lowest `k` exact eigenvalues (all bound states for Pöschl-Teller).
    pub fn analytic_spectrum(&self, k: usize) -> Vec<f64> {
        match self {
            Self::Oscillator(m) => m.analytic_spectrum(k),
            Self::PoeschlTeller(s) => pt_bound_spectrum(s.gamma(), k.saturating_sub(1)),
        }
    }

    pub fn as_oscillator(&self) -> Option<&OscillatorModel> {
        match self {
            Self::Oscillator(m) => Some(m),
            Self::PoeschlTeller(_) => None,
        }
    }
}

impl From<OscillatorModel> for ModelSpec {
    fn from(m: OscillatorModel) -> Self {
        Self::Oscillator(m)
    }
}

impl From<PoeschlTellerSpec> for ModelSpec {
    fn from(s: PoeschlTellerSpec) -> Self {
        Self::PoeschlTeller(s)
    }
}
