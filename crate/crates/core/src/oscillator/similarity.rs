use num_complex::Complex64;

use super::{ModelError, OscillatorModel};
use crate::fock::{build_annihilation, build_creation, matrix_exp, OperatorMatrix};
use crate::tolerances::Tolerances;

/// `S` and `S⁻¹` with `S⁻¹ H S` Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityPair {
    pub s: OperatorMatrix,
    pub s_inv: OperatorMatrix,
}

/// Exponent `X` of `S = e^X`: `(a† + a)/β` for the extended oscillator,
/// `iθ/2 (a² − a†²)` for Swanson, zero for the harmonic oscillator.
pub fn similarity_exponent(model: &OscillatorModel) -> OperatorMatrix {
    let b = model.basis();
    let a = build_annihilation(b);
    let ad = build_creation(b);
    match model {
        OscillatorModel::Harmonic { .. } => OperatorMatrix::zeros(b),
        OscillatorModel::ExtendedOscillator(s) => (&ad + &a).scale_real(1.0 / s.beta()),
        OscillatorModel::Swanson(s) => {
            let d = &(&a * &a) - &(&ad * &ad);
            d.scale(Complex64::new(0.0, s.theta() / 2.0))
        }
    }
}

pub(crate) fn check_floors(model: &OscillatorModel, tol: &Tolerances) -> Result<(), ModelError> {
    match model {
        OscillatorModel::ExtendedOscillator(s) if s.beta() < tol.beta_floor => Err(ModelError::BelowBetaFloor {
            beta: s.beta(),
            floor: tol.beta_floor,
        }),
        OscillatorModel::Swanson(s) if s.theta().abs() > tol.theta_ceiling => Err(ModelError::AboveThetaCeiling {
            theta: s.theta().abs(),
            ceiling: tol.theta_ceiling,
        }),
        _ => Ok(()),
    }
}

pub fn similarity_generator(model: &OscillatorModel, tol: &Tolerances) -> Result<SimilarityPair, ModelError> {
    check_floors(model, tol)?;
    let x = similarity_exponent(model);
    Ok(SimilarityPair {
        s: matrix_exp(&x)?,
        s_inv: matrix_exp(&(-&x))?,
    })
}

/// `S⁻¹ H S`.
pub fn hermitian_counterpart(model: &OscillatorModel, tol: &Tolerances) -> Result<OperatorMatrix, ModelError> {
    let pair = similarity_generator(model, tol)?;
    Ok(&(&pair.s_inv * &model.hamiltonian()) * &pair.s)
}
