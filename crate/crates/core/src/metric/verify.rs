use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{MetricError, MetricPair};
use crate::eigen::SpectralDecomposition;
use crate::fock::operator::frobenius;
use crate::fock::{Basis, GridBasis, OperatorMatrix};

/// Unit-width Gaussians centered here are negligible outside `|x| ≤ L/2`
/// for the admissible half widths.
const INTERIOR_CENTERS: [f64; 3] = [-1.0, 0.0, 1.0];

fn interior_vectors(grid: GridBasis) -> Vec<DVector<Complex64>> {
    let x = grid.nodes();
    INTERIOR_CENTERS
        .iter()
        .map(|&c| DVector::from_iterator(x.len(), x.iter().map(|&xi| Complex64::new((-(xi - c).powi(2) / 2.0).exp(), 0.0))))
        .collect()
}

/// `‖(QH − H†Q)_w‖_F / (‖Q_w‖_F ‖H_w‖_F)` on the top-left block.
pub fn window_residual_qh(h: &OperatorMatrix, q: &OperatorMatrix, window: usize) -> f64 {
    let w = window.min(h.dim());
    let lhs = product(q, h).view((0, 0), (w, w)).into_owned() - product(&h.adjoint(), q).view((0, 0), (w, w));
    frobenius(&lhs) / (frobenius(&q.window(w)) * frobenius(&h.window(w)))
}

fn interior_residual(grid: GridBasis, apply_a: impl Fn(&DVector<Complex64>) -> DVector<Complex64>, apply_b: impl Fn(&DVector<Complex64>) -> DVector<Complex64>) -> f64 {
    interior_vectors(grid)
        .iter()
        .map(|v| {
            let a = apply_a(v);
            let b = apply_b(v);
            (&a - &b).norm() / a.norm().max(b.norm())
        })
        .fold(0.0, f64::max)
}

fn relative(diff: &DMatrix<Complex64>, reference: f64) -> f64 {
    frobenius(diff) / reference
}

/// Column of the single unit entry in each row, when `a` is a permutation.
fn permutation(a: &OperatorMatrix) -> Option<Vec<usize>> {
    let n = a.dim();
    let one = Complex64::new(1.0, 0.0);
    let mut p = Vec::with_capacity(n);
    for i in 0..n {
        let mut col = None;
        for j in 0..n {
            let z = a.get(i, j);
            if z == one && col.is_none() {
                col = Some(j);
            } else if z != Complex64::new(0.0, 0.0) {
                return None;
            }
        }
        p.push(col?);
    }
    Some(p)
}

fn is_tridiagonal(a: &OperatorMatrix) -> bool {
    let n = a.dim();
    (0..n).all(|j| (0..n).all(|i| i.abs_diff(j) <= 1 || a.get(i, j) == Complex64::new(0.0, 0.0)))
}

/// `AB`, exploiting permutation or tridiagonal structure of either factor.
fn product(a: &OperatorMatrix, b: &OperatorMatrix) -> DMatrix<Complex64> {
    let n = a.dim();
    if let Some(p) = permutation(a) {
        return DMatrix::from_fn(n, n, |i, j| b.get(p[i], j));
    }
    if let Some(p) = permutation(b) {
        let mut inv = vec![0; n];
        for (i, &c) in p.iter().enumerate() {
            inv[c] = i;
        }
        return DMatrix::from_fn(n, n, |i, j| a.get(i, inv[j]));
    }
    if is_tridiagonal(b) {
        return DMatrix::from_fn(n, n, |i, j| {
            (j.saturating_sub(1)..(j + 2).min(n)).map(|k| a.get(i, k) * b.get(k, j)).sum()
        });
    }
    if is_tridiagonal(a) {
        return DMatrix::from_fn(n, n, |i, j| {
            (i.saturating_sub(1)..(i + 2).min(n)).map(|k| a.get(i, k) * b.get(k, j)).sum()
        });
    }
    a.entries() * b.entries()
}

/// Fill the residuals of `pair` against `h`.
///
/// Oscillator residuals for `Q` use the top-left `pair.window` block; grid
/// residuals use Gaussian test vectors supported in the interior.
pub fn verify_metric(h: &OperatorMatrix, mut pair: MetricPair) -> MetricPair {
    let q = &pair.q;
    let hd = h.adjoint();
    if let Some(j) = &pair.j {
        let d = product(j, h) - product(&hd, j);
        pair.residual_jh = Some(relative(&d, h.frobenius_norm()));
    }
    pair.residual_qh = Some(match h.basis() {
        Basis::Grid(g) => interior_residual(g, |v| q.apply(&h.apply(v)), |v| hd.apply(&q.apply(v))),
        _ => window_residual_qh(h, q, pair.window),
    });
    if let (Some(j), Some(log_q)) = (&pair.j, &pair.log_q) {
        let jl = OperatorMatrix::from_parts(log_q.basis(), product(j, log_q));
        let d = product(&jl, j) + log_q.entries();
        pair.residual_bender = Some(relative(&d, log_q.frobenius_norm().max(1.0)));
        pair.residual_jqj = Some(match h.basis() {
            Basis::Grid(g) => interior_residual(g, |v| j.apply(&q.apply(&j.apply(&q.apply(v)))), |v| v.clone()),
            _ => {
                let jq = OperatorMatrix::from_parts(q.basis(), product(j, q));
                let jqj = OperatorMatrix::from_parts(q.basis(), product(&jq, j));
                let w = pair.window.min(q.dim());
                frobenius(&((&jqj * q).window(w) - DMatrix::identity(w, w)))
            }
        });
    }
    pair
}

/// `η_i = sign⟨R_i|J|R_i⟩` over the first `window` pairs, after checking
/// that `J` is diagonal between distinct right eigenvectors.
pub fn eta_signature(
    decomp: &SpectralDecomposition,
    j: &OperatorMatrix,
    window: usize,
    offdiag_tol: f64,
) -> Result<Vec<i8>, MetricError> {
    let k = window.min(decomp.len());
    let r = decomp.right_vectors().columns(0, k).into_owned();
    let norms: Vec<f64> = r.column_iter().map(|c| c.norm()).collect();
    let g = r.adjoint() * j.entries() * &r;
    for a in 0..k {
        for b in 0..k {
            let value = g[(a, b)].norm() / (norms[a] * norms[b]);
            if a != b && value > offdiag_tol {
                return Err(MetricError::JOrthogonality { i: a, j: b, value });
            }
        }
    }
    Ok((0..k).map(|a| if g[(a, a)].re > 0.0 { 1 } else { -1 }).collect())
}
