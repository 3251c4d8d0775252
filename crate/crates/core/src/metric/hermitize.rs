use nalgebra::SymmetricEigen;
use serde::Serialize;

use super::MetricError;
use crate::fock::operator::residual_hermiticity;
use crate::fock::{hermitian_sqrt_pair, matrix_exp, OperatorMatrix};

/// `h̃ = Q^{1/2} H Q^{−1/2}` with its windowed Hermiticity residual.
#[derive(Debug, Clone, Serialize)]
pub struct Hermitized {
    #[serde(skip)]
    pub h: OperatorMatrix,
    pub window: usize,
    pub residual_window: f64,
}

impl Hermitized {
    fn new(h: OperatorMatrix, window: usize) -> Self {
        let window = window.min(h.dim());
        let residual_window = residual_hermiticity(&h.window(window));
        Self { h, window, residual_window }
    }

    /// Largest entry of `h̃_w − diag(target)` on the window.
    pub fn diagonal_deviation(&self, target: &[f64]) -> f64 {
        let w = self.h.window(self.window);
        let mut worst: f64 = 0.0;
        for i in 0..w.nrows() {
            for j in 0..w.ncols() {
                let t = if i == j { target.get(i).copied().unwrap_or(f64::NAN) } else { 0.0 };
                worst = worst.max((w[(i, j)] - t).norm());
            }
        }
        worst
    }

    /// Eigenvalues of the Hermitian part of the window, ascending.
    pub fn window_eigenvalues(&self) -> Vec<f64> {
        let w = self.h.window(self.window);
        let sym = (&w + w.adjoint()) * num_complex::Complex64::new(0.5, 0.0);
        let mut v: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// Hermitian counterpart through the principal square root of `Q`.
pub fn hermitize(h: &OperatorMatrix, q: &OperatorMatrix, window: usize) -> Result<Hermitized, MetricError> {
    let (s, s_inv) = hermitian_sqrt_pair(q)?;
    Ok(Hermitized::new(&(&s * h) * &s_inv, window))
}

/// Hermitian counterpart through `e^{±log Q/2}`, which avoids the
/// eigendecomposition of an ill-conditioned `Q`.
pub fn hermitize_with_log(h: &OperatorMatrix, log_q: &OperatorMatrix, window: usize) -> Result<Hermitized, MetricError> {
    let half = log_q.scale_real(0.5);
    let s = matrix_exp(&half)?;
    let s_inv = matrix_exp(&(-&half))?;
    Ok(Hermitized::new(&(&s * h) * &s_inv, window))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{decompose, PairingOptions};
    use crate::metric::{closed_form_metric, metric_from_biorthogonal};
    use crate::model::ModelSpec;
    use crate::oscillator::{swanson_frequency, ExtendedOscillatorSpec, SwansonSpec};
    use crate::tolerances::Tolerances;

    #[test]
    fn two_by_two_counterpart_is_hermitian() {
        let h = OperatorMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 2.0]]).unwrap();
        let d = decompose(&h, &PairingOptions::default()).unwrap();
        let q = metric_from_biorthogonal(&d, &Tolerances::default()).unwrap().q;
        let t = hermitize(&h, &q, 2).unwrap();
        assert!(t.residual_window < 1e-12);
        let ev = t.window_eigenvalues();
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn swanson_counterpart_is_a_harmonic_oscillator() {
        let theta = std::f64::consts::FRAC_PI_6;
        let model = ModelSpec::Oscillator(SwansonSpec::new(theta, 96).unwrap().into());
        let pair = closed_form_metric(&model, &Tolerances::default()).unwrap();
        let t = hermitize_with_log(&model.hamiltonian().unwrap(), pair.log_q.as_ref().unwrap(), 8).unwrap();
        assert!(t.residual_window < 1e-8, "{}", t.residual_window);
        let w = swanson_frequency(theta);
        let target: Vec<f64> = (0..8).map(|n| w * (n as f64 + 0.5)).collect();
        assert!(t.diagonal_deviation(&target) < 1e-6);
    }

    #[test]
    fn extended_counterpart_via_square_root() {
        let model = ModelSpec::Oscillator(ExtendedOscillatorSpec::new(2.0, 48).unwrap().into());
        let pair = closed_form_metric(&model, &Tolerances::default()).unwrap();
        let t = hermitize(&model.hamiltonian().unwrap(), &pair.q, 8).unwrap();
        assert!(t.residual_window < 1e-8, "{}", t.residual_window);
        let exact = model.analytic_spectrum(4);
        let ev = t.window_eigenvalues();
        assert!((ev[0] - exact[0]).abs() < 1e-6, "{ev:?}");
    }
}
