use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::MetricError;
use crate::eigen::{classify_reality, SpectralDecomposition};
use crate::fock::operator::frobenius;
use crate::fock::{min_hermitian_eigenvalue, OperatorMatrix};
use crate::tolerances::Tolerances;

/// `Q = Σ |L_n⟩⟨L_n|` with diagnostics from its assembly.
#[derive(Debug, Clone, Serialize)]
pub struct BiorthogonalMetric {
    #[serde(skip)]
    pub q: OperatorMatrix,
    /// `‖Q − Q†‖_F / ‖Q‖_F` before symmetrization.
    pub asymmetry: f64,
    pub min_eigenvalue: f64,
    /// Whether every eigenpair of the matrix went into the sum.
    pub complete: bool,
}

/// Metric from the left eigenvectors of a biorthonormal system.
///
/// A partial sum is only positive semidefinite, so the definiteness check
/// applies to complete decompositions alone.
pub fn metric_from_biorthogonal(decomp: &SpectralDecomposition, tol: &Tolerances) -> Result<BiorthogonalMetric, MetricError> {
    let l = decomp.left_vectors();
    let raw: DMatrix<Complex64> = l * l.adjoint();
    let norm = frobenius(&raw);
    let asymmetry = if norm > 0.0 { frobenius(&(&raw - raw.adjoint())) / norm } else { 0.0 };
    if asymmetry > tol.metric_asymmetry {
        return Err(MetricError::Asymmetric {
            asymmetry,
            limit: tol.metric_asymmetry,
        });
    }
    let q = OperatorMatrix::new(decomp.basis(), raw)?.hermitian_part();
    let min_eigenvalue = min_hermitian_eigenvalue(&q);
    let complete = decomp.is_complete();
    if complete && !(min_eigenvalue > q.dim() as f64 * f64::EPSILON * norm) {
        return Err(MetricError::NotPositiveDefinite { min_eigenvalue });
    }
    Ok(BiorthogonalMetric {
        q,
        asymmetry,
        min_eigenvalue,
        complete,
    })
}

/// Real-eigenvalue pairs rescaled so that `⟨R_n|J|R_n⟩ = ±1`.
///
/// This fixes the per-pair freedom `R → cR, L → L/c̄` the same way the
/// closed-form metric does, which makes the two comparable.
pub fn involution_normalized_real_pairs(
    decomp: &SpectralDecomposition,
    j: &OperatorMatrix,
    tol: &Tolerances,
) -> Result<SpectralDecomposition, MetricError> {
    let report = classify_reality(decomp.eigenvalues(), tol.im_tol);
    Ok(decomp
        .select(&report.real_indices)
        .normalize_with_involution(j, tol.involution_neutral)?)
}

/// Outcome of comparing two metrics up to a positive overall factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleMatch {
    pub scale: f64,
    pub relative_error: f64,
    pub window: usize,
}

/// `‖s·A_w − B_w‖_F / ‖B_w‖_F` on the top-left `window × window` block,
/// with `s` fixed by the `(0,0)` entries.
pub fn scale_matched_difference(a: &OperatorMatrix, b: &OperatorMatrix, window: usize) -> ScaleMatch {
    let aw = a.window(window);
    let bw = b.window(window);
    let scale = if aw[(0, 0)].re != 0.0 { bw[(0, 0)].re / aw[(0, 0)].re } else { 1.0 };
    let diff = &aw * Complex64::new(scale, 0.0) - &bw;
    ScaleMatch {
        scale,
        relative_error: frobenius(&diff) / frobenius(&bw),
        window: aw.nrows(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{decompose, PairingOptions};
    use crate::metric::{build_involution, closed_form_metric};
    use crate::model::ModelSpec;
    use crate::oscillator::ExtendedOscillatorSpec;

    #[test]
    fn hermitian_matrix_gives_identity_metric() {
        let h = OperatorMatrix::from_real_rows(&[&[2.0, 1.0, 0.0], &[1.0, 3.0, 1.0], &[0.0, 1.0, 5.0]]).unwrap();
        let d = decompose(&h, &PairingOptions::default()).unwrap();
        let m = metric_from_biorthogonal(&d, &Tolerances::default()).unwrap();
        assert!(m.complete);
        assert!((&m.q - &OperatorMatrix::identity(h.basis())).max_abs() < 1e-12);
        assert!((m.min_eigenvalue - 1.0).abs() < 1e-12);
    }

    #[test]
    fn upper_triangular_metric_intertwines() {
        let h = OperatorMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 2.0]]).unwrap();
        let d = decompose(&h, &PairingOptions::default()).unwrap();
        let q = metric_from_biorthogonal(&d, &Tolerances::default()).unwrap().q;
        let r = &(&q * &h) - &(&h.adjoint() * &q);
        assert!(r.max_abs() < 1e-12 * q.max_abs());
        assert!(min_hermitian_eigenvalue(&q) > 0.0);
    }

    #[test]
    fn extended_oscillator_window_matches_closed_form() {
        let tol = Tolerances::default();
        let model = ModelSpec::Oscillator(ExtendedOscillatorSpec::new(2.0, 32).unwrap().into());
        let h = model.hamiltonian().unwrap();
        let d = decompose(&h, &PairingOptions::default()).unwrap();
        let j = build_involution(&model).unwrap();
        let sub = involution_normalized_real_pairs(&d, &j, &tol).unwrap();
        let m = metric_from_biorthogonal(&sub, &tol).unwrap();
        assert!(!m.complete);
        let exact = closed_form_metric(&model, &tol).unwrap().q;
        let cmp = scale_matched_difference(&m.q, &exact, 8);
        assert!(cmp.relative_error < 1e-8, "{cmp:?}");
        assert!((cmp.scale - 1.0).abs() < 1e-6, "{cmp:?}");
    }

    #[test]
    fn scale_match_recovers_factor() {
        let a = OperatorMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 4.0]]).unwrap();
        let b = a.scale_real(3.5);
        let m = scale_matched_difference(&a, &b, 2);
        assert!((m.scale - 3.5).abs() < 1e-15);
        assert!(m.relative_error < 1e-15);
    }
}
