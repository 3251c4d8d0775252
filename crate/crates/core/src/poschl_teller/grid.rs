use num_complex::Complex64;

use super::{Deformation, PoeschlTellerSpec, PtError};
use crate::eigen::SymmetricTridiagonal;
use crate::fock::{hermitian_exp, GridBasis, OperatorMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn tridiagonal_operator(grid: GridBasis, diag: impl Fn(usize) -> Complex64, off: impl Fn(usize, usize) -> Complex64) -> OperatorMatrix {
    OperatorMatrix::from_fn(grid, |i, j| {
        if i == j {
            diag(i)
        } else if i.abs_diff(j) == 1 {
            off(i, j)
        } else {
            ZERO
        }
    })
}

/// `−d²/dx²` as `(−ψ_{k−1} + 2ψ_k − ψ_{k+1})/h²` with Dirichlet ends.
pub fn grid_laplacian(grid: GridBasis) -> OperatorMatrix {
    let h2 = grid.spacing().powi(2);
    tridiagonal_operator(grid, |_| Complex64::new(2.0 / h2, 0.0), |_, _| Complex64::new(-1.0 / h2, 0.0))
}

/// `p = −i d/dx` by central differences; Hermitian.
pub fn grid_momentum(grid: GridBasis) -> OperatorMatrix {
    let c = 1.0 / (2.0 * grid.spacing());
    tridiagonal_operator(grid, |_| ZERO, |i, j| Complex64::new(0.0, if j > i { -c } else { c }))
}

pub fn grid_position(grid: GridBasis) -> OperatorMatrix {
    let x = grid.nodes();
    let diag: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    OperatorMatrix::diagonal(grid, &diag)
}

/// Coordinate reflection `x_k ↔ x_{M−1−k}`.
pub fn pt_reflection(grid: GridBasis) -> OperatorMatrix {
    let m = grid.points();
    OperatorMatrix::from_fn(grid, |i, j| if i + j + 1 == m { Complex64::new(1.0, 0.0) } else { ZERO })
}

/// `−γ(γ−1)/cosh²(z_k)` at the deformed node coordinates.
pub fn pt_potential(spec: &PoeschlTellerSpec) -> Result<Vec<Complex64>, PtError> {
    let g = spec.gamma();
    let strength = g * (g - 1.0);
    spec.grid()
        .nodes()
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let ch = spec.deformation().coordinate(x).cosh();
            if !(ch.norm() > 1e-150) {
                return Err(PtError::SingularPotential { node: k, x });
            }
            Ok(-(ch * ch).inv() * strength)
        })
        .collect()
}

pub fn build_pt_tridiagonal(spec: &PoeschlTellerSpec) -> Result<SymmetricTridiagonal, PtError> {
    let grid = spec.grid();
    let m = grid.points();
    let h2 = grid.spacing().powi(2);
    let kin = spec.deformation().momentum_factor().powi(2);
    let v = pt_potential(spec)?;
    let diag = v.iter().map(|&vk| kin * (2.0 / h2) + vk).collect();
    let off = vec![kin * (-1.0 / h2); m - 1];
    Ok(SymmetricTridiagonal::new(grid.into(), diag, off)?)
}

/// Dense grid Hamiltonian; complex symmetric tridiagonal in all three cases.
pub fn build_pt(spec: &PoeschlTellerSpec) -> Result<OperatorMatrix, PtError> {
    Ok(build_pt_tridiagonal(spec)?.to_operator())
}

/// `(γ−1) tanh(z_k)`.
pub fn superpotential(spec: &PoeschlTellerSpec) -> Vec<Complex64> {
    let g1 = spec.gamma() - 1.0;
    spec.grid()
        .nodes()
        .iter()
        .map(|&x| spec.deformation().coordinate(x).tanh() * g1)
        .collect()
}

/// `(A‡, A) = (−i p f + W, i p f + W)` with `f` the momentum factor.
pub fn build_pt_ladder(spec: &PoeschlTellerSpec) -> (OperatorMatrix, OperatorMatrix) {
    let grid = spec.grid();
    let p = grid_momentum(grid).scale(spec.deformation().momentum_factor());
    let w = OperatorMatrix::diagonal(grid, &superpotential(spec));
    let ip = p.scale(Complex64::new(0.0, 1.0));
    (&w - &ip, &w + &ip)
}

/// Exponent of the grid metric: `−2α p` (shift) or `−θ(px + xp)` (scale).
pub fn pt_metric_exponent(spec: &PoeschlTellerSpec) -> OperatorMatrix {
    let grid = spec.grid();
    let p = grid_momentum(grid);
    match spec.deformation() {
        Deformation::None => OperatorMatrix::zeros(grid),
        Deformation::Shift { alpha } => p.scale_real(-2.0 * alpha),
        Deformation::Scale { theta } => {
            let x = grid_position(grid);
            (&(&p * &x) + &(&x * &p)).scale_real(-theta)
        }
    }
}

/// Metric `Q = e^{exponent}` from the spectral decomposition of the
/// Hermitian exponent, so every eigenvalue is a positive exponential even
/// when the condition number exceeds `1/ε`.
pub fn pt_metric(spec: &PoeschlTellerSpec) -> OperatorMatrix {
    if spec.deformation().is_trivial() {
        return OperatorMatrix::identity(spec.grid());
    }
    hermitian_exp(&pt_metric_exponent(spec))
}
