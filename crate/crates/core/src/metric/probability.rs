use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use super::MetricError;
use crate::eigen::SpectralDecomposition;
use crate::fock::OperatorMatrix;

#[derive(Debug, Clone, Serialize)]
pub struct ProbabilityReport {
    pub eigenvalues: Vec<Complex64>,
    pub probabilities: Vec<f64>,
    pub sum: f64,
    /// `⟨Ξ|Q|Ξ⟩` of the state as supplied.
    pub metric_norm: f64,
    /// Share of `‖Ξ‖²` outside the window.
    pub outside_weight: f64,
    pub warnings: Vec<String>,
}

fn check_len(state: &DVector<Complex64>, dim: usize) -> Result<(), MetricError> {
    if state.len() != dim {
        return Err(MetricError::StateLength { state: state.len(), dim });
    }
    Ok(())
}

/// `p_n = |⟨L_n|Ξ⟩|²` for the `Q`-normalized state.
pub fn transition_probability(
    state: &DVector<Complex64>,
    decomp: &SpectralDecomposition,
    q: &OperatorMatrix,
    window: usize,
    support_leak: f64,
) -> Result<ProbabilityReport, MetricError> {
    check_len(state, q.dim())?;
    let metric_norm = state.dotc(&q.apply(state)).re;
    if !(metric_norm > 0.0) {
        return Err(MetricError::NonPositiveNorm { value: metric_norm });
    }
    let xi = state / Complex64::new(metric_norm.sqrt(), 0.0);
    let probabilities: Vec<f64> = (0..decomp.len()).map(|n| decomp.left(n).dotc(&xi).norm_sqr()).collect();
    let total = state.norm_squared();
    let outside: f64 = state.iter().skip(window).map(|z| z.norm_sqr()).sum();
    let outside_weight = if total > 0.0 { outside / total } else { 0.0 };
    let mut warnings = Vec::new();
    if outside_weight > support_leak {
        warnings.push(format!(
            "state carries weight {outside_weight:e} outside the {window}-level window; probabilities may not sum to 1"
        ));
    }
    Ok(ProbabilityReport {
        eigenvalues: decomp.eigenvalues().to_vec(),
        sum: probabilities.iter().sum(),
        probabilities,
        metric_norm,
        outside_weight,
        warnings,
    })
}

/// `⟨R_n|J|Ξ⟩`, equal to `η_n ⟨L_n|Ξ⟩` when the pairs are `J`-normalized.
pub fn involution_amplitudes(
    state: &DVector<Complex64>,
    decomp: &SpectralDecomposition,
    j: &OperatorMatrix,
) -> Result<Vec<Complex64>, MetricError> {
    check_len(state, j.dim())?;
    let js = j.apply(state);
    Ok((0..decomp.len()).map(|n| decomp.right(n).dotc(&js)).collect())
}
