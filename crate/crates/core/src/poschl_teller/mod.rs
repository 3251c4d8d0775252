//! Pöschl-Teller Hamiltonian `p² − γ(γ−1)/cosh²x` on a Dirichlet grid, with
//! the complex-shift and complex-scaling deformations.

mod bound;
mod grid;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::eigen::EigenError;
use crate::fock::{FockError, GridBasis};

pub use bound::{bound_im_tol, extract_bound_states, pt_bound_spectrum, solve_bound_states, BOUNDARY_FRACTION};
pub use grid::{
    build_pt, build_pt_ladder, build_pt_tridiagonal, grid_laplacian, grid_momentum, grid_position, pt_metric,
    pt_metric_exponent, pt_potential, pt_reflection, superpotential,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PtError {
    #[error("invalid {field} = {value}: {reason}")]
    InvalidParameter {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("potential is singular at node {node} (x = {x})")]
    SingularPotential { node: usize, x: f64 },
    #[error("no metric for the undeformed Hamiltonian is needed; it is Hermitian")]
    Undeformed,
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Deformation {
    None,
    /// `x → x − iα`.
    Shift { alpha: f64 },
    /// `p → p e^{iθ}`, `x → x e^{−iθ}`.
    Scale { theta: f64 },
}

impl Deformation {
    /// Complex coordinate at which the potential is evaluated.
    pub fn coordinate(&self, x: f64) -> Complex64 {
        match *self {
            Deformation::None => Complex64::new(x, 0.0),
            Deformation::Shift { alpha } => Complex64::new(x, -alpha),
            Deformation::Scale { theta } => Complex64::from_polar(1.0, -theta) * x,
        }
    }

    /// Factor multiplying `p`.
    pub fn momentum_factor(&self) -> Complex64 {
        match *self {
            Deformation::Scale { theta } => Complex64::from_polar(1.0, theta),
            _ => Complex64::new(1.0, 0.0),
        }
    }

    pub fn is_trivial(&self) -> bool {
        match *self {
            Deformation::None => true,
            Deformation::Shift { alpha } => alpha == 0.0,
            Deformation::Scale { theta } => theta == 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoeschlTellerSpec {
    gamma: f64,
    deformation: Deformation,
    grid: GridBasis,
}

impl PoeschlTellerSpec {
    pub fn new(gamma: f64, deformation: Deformation, grid: GridBasis) -> Result<Self, PtError> {
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(PtError::InvalidParameter {
                field: "gamma",
                value: gamma,
                reason: "must exceed 1",
            });
        }
        let quarter = std::f64::consts::FRAC_PI_4;
        match deformation {
            Deformation::Shift { alpha } if !(alpha.is_finite() && alpha.abs() < quarter) => {
                return Err(PtError::InvalidParameter {
                    field: "alpha",
                    value: alpha,
                    reason: "must satisfy |alpha| < pi/4",
                })
            }
            Deformation::Scale { theta } if !(theta.is_finite() && theta.abs() < quarter) => {
                return Err(PtError::InvalidParameter {
                    field: "theta",
                    value: theta,
                    reason: "must satisfy |theta| < pi/4",
                })
            }
            _ => {}
        }
        Ok(Self {
            gamma,
            deformation,
            grid,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn deformation(&self) -> Deformation {
        self.deformation
    }

    pub fn grid(&self) -> GridBasis {
        self.grid
    }

    pub fn with_grid(&self, grid: GridBasis) -> Self {
        Self { grid, ..*self }
    }

    pub fn with_deformation(&self, deformation: Deformation) -> Result<Self, PtError> {
        Self::new(self.gamma, deformation, self.grid)
    }
}
