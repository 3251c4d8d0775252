//! Extended oscillator, Swanson oscillator and the harmonic baseline.

mod eigenfunction;
mod hamiltonian;
pub(crate) mod similarity;

use serde::Serialize;
use thiserror::Error;

use crate::fock::{FockBasis, FockError};

pub use eigenfunction::{eval_eigenfunction, AnalyticEigenfunction, GaussianPolynomial, Side};
pub use hamiltonian::{
    build_extended_oscillator, build_harmonic, build_swanson, extended_oscillator_from_ladder,
    extended_oscillator_spectrum, harmonic_spectrum, swanson_coupling, swanson_frequency, swanson_from_ladder,
    swanson_spectrum,
};
pub use similarity::{hermitian_counterpart, similarity_exponent, similarity_generator, SimilarityPair};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid {field} = {value}: {reason}")]
    InvalidParameter {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("beta = {beta} is below the exponential floor {floor}")]
    BelowBetaFloor { beta: f64, floor: f64 },
    #[error("|theta| = {theta} exceeds the truncation ceiling {ceiling}")]
    AboveThetaCeiling { theta: f64, ceiling: f64 },
    #[error("grid does not contain the eigenfunction: boundary value {tail:e} against peak {peak:e}")]
    Domain { tail: f64, peak: f64 },
    #[error(transparent)]
    Fock(#[from] FockError),
}

/// `H_β = β/2 (p² + x²) + i√2 p`, truncated to `dim` levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtendedOscillatorSpec {
    beta: f64,
    basis: FockBasis,
}

impl ExtendedOscillatorSpec {
    pub fn new(beta: f64, dim: usize) -> Result<Self, ModelError> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(ModelError::InvalidParameter {
                field: "beta",
                value: beta,
                reason: "must be positive and finite",
            });
        }
        Ok(Self {
            beta,
            basis: FockBasis::new(dim)?,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> FockBasis {
        self.basis
    }
}

/// `H_θ = ½(p² + x²) − (i/2) tan 2θ (p² − x²)`, truncated to `dim` levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SwansonSpec {
    theta: f64,
    basis: FockBasis,
}

impl SwansonSpec {
    pub fn new(theta: f64, dim: usize) -> Result<Self, ModelError> {
        if !(theta.is_finite() && theta.abs() < std::f64::consts::FRAC_PI_4) {
            return Err(ModelError::InvalidParameter {
                field: "theta",
                value: theta,
                reason: "must satisfy |theta| < pi/4",
            });
        }
        Ok(Self {
            theta,
            basis: FockBasis::new(dim)?,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> FockBasis {
        self.basis
    }
}

/// One of the oscillator families on a truncated Fock basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum OscillatorModel {
    Harmonic { basis: FockBasis },
    ExtendedOscillator(ExtendedOscillatorSpec),
    Swanson(SwansonSpec),
}

impl OscillatorModel {
    pub fn basis(&self) -> FockBasis {
        match self {
            Self::Harmonic { basis } => *basis,
            Self::ExtendedOscillator(s) => s.basis(),
            Self::Swanson(s) => s.basis(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis().dim()
    }

    pub fn hamiltonian(&self) -> crate::fock::OperatorMatrix {
        match self {
            Self::Harmonic { basis } => build_harmonic(*basis),
            Self::ExtendedOscillator(s) => build_extended_oscillator(s),
            Self::Swanson(s) => build_swanson(s),
        }
    }

    /// Lowest `k` exact eigenvalues.
    pub fn analytic_spectrum(&self, k: usize) -> Vec<f64> {
        match self {
            Self::Harmonic { .. } => harmonic_spectrum(k),
            Self::ExtendedOscillator(s) => extended_oscillator_spectrum(s, k),
            Self::Swanson(s) => swanson_spectrum(s, k),
        }
    }
}

impl From<ExtendedOscillatorSpec> for OscillatorModel {
    fn from(s: ExtendedOscillatorSpec) -> Self {
        Self::ExtendedOscillator(s)
    }
}

impl From<SwansonSpec> for OscillatorModel {
    fn from(s: SwansonSpec) -> Self {
        Self::Swanson(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        assert!(ExtendedOscillatorSpec::new(0.0, 8).is_err());
        assert!(ExtendedOscillatorSpec::new(-1.0, 8).is_err());
        assert!(ExtendedOscillatorSpec::new(2.0, 1).is_err());
        assert!(SwansonSpec::new(std::f64::consts::FRAC_PI_4, 8).is_err());
        assert!(SwansonSpec::new(-0.7, 8).is_ok());
        assert!(SwansonSpec::new(f64::NAN, 8).is_err());
    }
}
