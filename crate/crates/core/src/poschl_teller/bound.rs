use num_complex::Complex64;

use super::{build_pt_tridiagonal, Deformation, PoeschlTellerSpec, PtError};
use crate::eigen::SpectralDecomposition;
use crate::tolerances::Tolerances;

/// Share of nodes on each side counted as boundary for localization.
pub const BOUNDARY_FRACTION: f64 = 0.05;

/// `E_n = −(γ−1−n)²` for integers `0 ≤ n ≤ max_n` with `n < γ−1`.
pub fn pt_bound_spectrum(gamma: f64, max_n: usize) -> Vec<f64> {
    (0..=max_n)
        .take_while(|&n| (n as f64) < gamma - 1.0)
        .map(|n| -(gamma - 1.0 - n as f64).powi(2))
        .collect()
}

fn boundary_mass(v: nalgebra::DVectorView<'_, Complex64>) -> f64 {
    let m = v.len();
    let edge = ((m as f64 * BOUNDARY_FRACTION).ceil() as usize).max(1);
    let total = v.norm_squared();
    let outer: f64 = (0..edge).chain(m - edge..m).map(|k| v[k].norm_sqr()).sum();
    outer / total
}

/// Keep pairs with `Re λ < −im_tol`, `|Im λ| ≤ im_tol` and boundary mass of
/// the unit right vector at most `loc_tol`; ascending order.
pub fn extract_bound_states(decomp: &SpectralDecomposition, im_tol: f64, loc_tol: f64) -> SpectralDecomposition {
    let mut idx: Vec<usize> = (0..decomp.len())
        .filter(|&i| {
            let z = decomp.eigenvalue(i);
            z.re < -im_tol && z.im.abs() <= im_tol && boundary_mass(decomp.right(i)) <= loc_tol
        })
        .collect();
    idx.sort_by(|&a, &b| decomp.eigenvalue(a).re.total_cmp(&decomp.eigenvalue(b).re));
    decomp.select(&idx)
}

/// Imaginary-part tolerance for a deformation.
pub fn bound_im_tol(deformation: Deformation, tol: &Tolerances) -> f64 {
    match deformation {
        Deformation::Scale { .. } => tol.pt_scale_im_tol,
        _ => tol.pt_im_tol,
    }
}

/// Bound states of the grid Hamiltonian via the tridiagonal solver.
pub fn solve_bound_states(spec: &PoeschlTellerSpec, tol: &Tolerances) -> Result<SpectralDecomposition, PtError> {
    let t = build_pt_tridiagonal(spec)?;
    let im_tol = bound_im_tol(spec.deformation(), tol);
    let candidates = t.decompose_selected(|z| z.re < -im_tol && z.im.abs() <= im_tol, tol.pairing)?;
    Ok(extract_bound_states(&candidates, im_tol, tol.loc_tol))
}
