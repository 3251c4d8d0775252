//! Truncated Fock-space operators and dense matrix functions.

mod basis;
mod expm;
mod ladder;
pub(crate) mod operator;
mod sqrt;

use thiserror::Error;

pub use basis::{Basis, FockBasis, GridBasis, GRID_SUPPORT_BOUND};
pub use expm::{expm, matrix_exp};
pub use ladder::{build_annihilation, build_creation, build_momentum, build_number, build_position};
pub use operator::OperatorMatrix;
pub use sqrt::{hermitian_exp, hermitian_sqrt, hermitian_sqrt_pair, min_hermitian_eigenvalue};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("basis dimension {dim} is below the minimum of 2")]
    BasisTooSmall { dim: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("matrix is not square ({rows}×{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix exponential overflows (1-norm {norm:e})")]
    ExpOverflow { norm: f64 },
    #[error("singular Padé denominator in matrix exponential")]
    ExpSingularDenominator,
    #[error("matrix is not positive definite: eigenvalue {eigenvalue:e}")]
    NotPositiveDefinite { eigenvalue: f64 },
}
