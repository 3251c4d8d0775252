use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{FockError, OperatorMatrix};

/// Eigenvalues at or below `n · ε · λ_max` are treated as non-positive.
fn positivity_floor(n: usize, lambda_max: f64) -> f64 {
    n as f64 * f64::EPSILON * lambda_max.abs()
}

fn spectral_function(
    basis: crate::fock::Basis,
    eig: &SymmetricEigen<Complex64, nalgebra::Dyn>,
    f: impl Fn(f64) -> f64,
) -> OperatorMatrix {
    let n = eig.eigenvalues.len();
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (k, mut col) in scaled.column_iter_mut().enumerate() {
        col *= Complex64::new(f(eig.eigenvalues[k]), 0.0);
    }
    let out: DMatrix<Complex64> = scaled * v.adjoint();
    let out = (&out + out.adjoint()) * Complex64::new(0.5, 0.0);
    debug_assert_eq!(out.nrows(), n);
    OperatorMatrix::from_parts(basis, out)
}

fn positive_eigen(a: &OperatorMatrix) -> Result<SymmetricEigen<Complex64, nalgebra::Dyn>, FockError> {
    let sym = a.hermitian_part();
    let eig = SymmetricEigen::new(sym.into_entries());
    let max = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if !(max > 0.0) || min <= positivity_floor(a.dim(), max) {
        return Err(FockError::NotPositiveDefinite { eigenvalue: min });
    }
    Ok(eig)
}

/// Principal square root of a Hermitian positive definite matrix.
///
/// The input is symmetrized as `(A + A†)/2` before the eigendecomposition.
pub fn hermitian_sqrt(a: &OperatorMatrix) -> Result<OperatorMatrix, FockError> {
    let eig = positive_eigen(a)?;
    Ok(spectral_function(a.basis(), &eig, f64::sqrt))
}

/// `(A^{1/2}, A^{−1/2})` from a single eigendecomposition.
pub fn hermitian_sqrt_pair(a: &OperatorMatrix) -> Result<(OperatorMatrix, OperatorMatrix), FockError> {
    let eig = positive_eigen(a)?;
    Ok((
        spectral_function(a.basis(), &eig, f64::sqrt),
        spectral_function(a.basis(), &eig, |l| 1.0 / l.sqrt()),
    ))
}

/// `e^A` for Hermitian `A` through its eigendecomposition; the result is
/// positive definite by construction.
pub fn hermitian_exp(a: &OperatorMatrix) -> OperatorMatrix {
    let eig = SymmetricEigen::new(a.hermitian_part().into_entries());
    spectral_function(a.basis(), &eig, f64::exp)
}

/// Smallest eigenvalue of the Hermitian part.
pub fn min_hermitian_eigenvalue(a: &OperatorMatrix) -> f64 {
    let eig = SymmetricEigen::new(a.hermitian_part().into_entries());
    eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}
