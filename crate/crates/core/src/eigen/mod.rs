//! Dense nonsymmetric eigensolver with biorthogonal left/right pairing.

mod balance;
mod decomposition;
mod hessenberg;
mod reality;
mod schur;
mod tridiagonal;

use num_complex::Complex64;
use thiserror::Error;

pub use decomposition::{
    biorthogonal_pair, decompose, decompose_conditioned, decompose_lowest, decompose_with, eig_left, eig_left_with, eig_right, eig_right_with, eigenvalues,
    eigenvalues_with, residual, EigenOptions, EigenPairs, Normalization, PairingOptions, SpectralDecomposition,
};
pub use reality::{classify_reality, is_real, RealityReport};
pub use tridiagonal::SymmetricTridiagonal;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EigenError {
    #[error("QR iteration did not converge within {sweeps} sweeps ({} eigenvalues deflated)", partial.len())]
    NoConvergence { sweeps: usize, partial: Vec<Complex64> },
    #[error("quasi-defective pair {index} at λ = {eigenvalue}: |⟨L|R⟩| = {overlap:e}")]
    QuasiDefective {
        index: usize,
        eigenvalue: Complex64,
        overlap: f64,
    },
    #[error("eigenvalue {index} ({eigenvalue}) has no left partner (nearest at distance {distance:e})")]
    Unmatched {
        index: usize,
        eigenvalue: Complex64,
        distance: f64,
    },
    #[error("right and left systems differ in length ({right} vs {left})")]
    LengthMismatch { right: usize, left: usize },
    #[error("eigenvector {index} at λ = {eigenvalue} is neutral under J (⟨R|J|R⟩ = {value:e})")]
    InvolutionNeutral {
        index: usize,
        eigenvalue: Complex64,
        value: f64,
    },
    #[error("matrix is not complex symmetric tridiagonal at ({row}, {col})")]
    NotTridiagonal { row: usize, col: usize },
    #[error("complex orthogonal QL rotation broke down at row {index}")]
    TridiagonalBreakdown { index: usize },
}
