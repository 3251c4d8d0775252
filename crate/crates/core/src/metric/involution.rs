use num_complex::Complex64;

use super::{MetricError, MetricPair};
use crate::fock::{build_annihilation, build_creation, matrix_exp, OperatorMatrix};
use crate::model::ModelSpec;
use crate::oscillator::OscillatorModel;
use crate::poschl_teller::{pt_metric, pt_metric_exponent, pt_reflection, Deformation};
use crate::tolerances::Tolerances;

fn sign_diagonal(m: &OscillatorModel, sign: impl Fn(usize) -> f64) -> OperatorMatrix {
    let d: Vec<Complex64> = (0..m.dim()).map(|n| Complex64::new(sign(n), 0.0)).collect();
    OperatorMatrix::diagonal(m.basis(), &d)
}

/// Hermitian involution with `JH = H†J`: parity `diag((−1)^n)` for the
/// extended oscillator, `diag(1,1,−1,−1,…)` for Swanson, the identity for
/// the harmonic oscillator and coordinate reflection on the unscaled grid.
/// The complex-scaled grid has none.
pub fn build_involution(model: &ModelSpec) -> Option<OperatorMatrix> {
    match model {
        ModelSpec::Oscillator(m @ OscillatorModel::Harmonic { .. }) => Some(sign_diagonal(m, |_| 1.0)),
        ModelSpec::Oscillator(m @ OscillatorModel::ExtendedOscillator(_)) => {
            Some(sign_diagonal(m, |n| if n % 2 == 0 { 1.0 } else { -1.0 }))
        }
        ModelSpec::Oscillator(m @ OscillatorModel::Swanson(_)) => {
            Some(sign_diagonal(m, |n| if (n / 2) % 2 == 0 { 1.0 } else { -1.0 }))
        }
        ModelSpec::PoeschlTeller(s) => match s.deformation() {
            Deformation::Scale { .. } => None,
            _ => Some(pt_reflection(s.grid())),
        },
    }
}

/// Sign pattern `η_i` the closed-form eigenvectors carry under `J`.
pub fn expected_eta(model: &ModelSpec, k: usize) -> Option<Vec<i8>> {
    match model {
        ModelSpec::Oscillator(OscillatorModel::Harmonic { .. }) => Some(vec![1; k]),
        ModelSpec::Oscillator(OscillatorModel::ExtendedOscillator(_)) => {
            Some((0..k).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect())
        }
        ModelSpec::Oscillator(OscillatorModel::Swanson(_)) => {
            Some((0..k).map(|i| if (i / 2) % 2 == 0 { 1 } else { -1 }).collect())
        }
        ModelSpec::PoeschlTeller(_) => None,
    }
}

/// Exact exponent `log Q`: `−2(a†+a)/β`, `−iθ(a² − a†²)`, zero for the
/// harmonic oscillator, and the grid exponents `−2αp`, `−θ(px+xp)`.
pub fn closed_form_log_q(model: &ModelSpec, tol: &Tolerances) -> Result<OperatorMatrix, MetricError> {
    match model {
        ModelSpec::Oscillator(m) => {
            crate::oscillator::similarity::check_floors(m, tol)?;
            let b = m.basis();
            let a = build_annihilation(b);
            let ad = build_creation(b);
            Ok(match m {
                OscillatorModel::Harmonic { .. } => OperatorMatrix::zeros(b),
                OscillatorModel::ExtendedOscillator(s) => (&ad + &a).scale_real(-2.0 / s.beta()),
                OscillatorModel::Swanson(s) => (&(&a * &a) - &(&ad * &ad)).scale(Complex64::new(0.0, -s.theta())),
            })
        }
        ModelSpec::PoeschlTeller(s) => Ok(pt_metric_exponent(s)),
    }
}

/// `J`, `Q = e^{log Q}` and `log Q` in closed form.
pub fn closed_form_metric(model: &ModelSpec, tol: &Tolerances) -> Result<MetricPair, MetricError> {
    let log_q = closed_form_log_q(model, tol)?;
    let q = match model {
        ModelSpec::PoeschlTeller(s) => pt_metric(s),
        ModelSpec::Oscillator(_) => matrix_exp(&log_q)?.hermitian_part(),
    };
    Ok(MetricPair::new(build_involution(model), q, Some(log_q)))
}
