use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{Basis, FockError};

/// Dense square complex matrix tagged with the basis it is expressed in.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    basis: Basis,
    entries: DMatrix<Complex64>,
}

impl OperatorMatrix {
    pub fn new(basis: impl Into<Basis>, entries: DMatrix<Complex64>) -> Result<Self, FockError> {
        let basis = basis.into();
        if entries.nrows() != entries.ncols() {
            return Err(FockError::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        if entries.nrows() != basis.dim() {
            return Err(FockError::DimensionMismatch {
                left: basis.dim(),
                right: entries.nrows(),
            });
        }
        if let Some(pos) = entries.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            let n = entries.nrows();
            return Err(FockError::NonFinite {
                row: pos % n,
                col: pos / n,
            });
        }
        Ok(Self { basis, entries })
    }

    /// Matrix on a plain `C^n` basis.
    pub fn plain(entries: DMatrix<Complex64>) -> Result<Self, FockError> {
        let dim = entries.nrows();
        Self::new(Basis::Plain { dim }, entries)
    }

    /// Real-valued matrix from row-major data.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, FockError> {
        let n = rows.len();
        let m = DMatrix::from_fn(n, rows.first().map_or(0, |r| r.len()), |i, j| {
            Complex64::new(rows[i][j], 0.0)
        });
        Self::plain(m)
    }

    pub(crate) fn from_parts(basis: Basis, entries: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(entries.nrows(), basis.dim());
        debug_assert_eq!(entries.ncols(), basis.dim());
        Self { basis, entries }
    }

    pub fn from_fn(basis: impl Into<Basis>, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let basis = basis.into();
        let n = basis.dim();
        Self::from_parts(basis, DMatrix::from_fn(n, n, f))
    }

    pub fn zeros(basis: impl Into<Basis>) -> Self {
        let basis = basis.into();
        let n = basis.dim();
        Self::from_parts(basis, DMatrix::zeros(n, n))
    }

    pub fn identity(basis: impl Into<Basis>) -> Self {
        let basis = basis.into();
        let n = basis.dim();
        Self::from_parts(basis, DMatrix::identity(n, n))
    }

    pub fn diagonal(basis: impl Into<Basis>, diag: &[Complex64]) -> Self {
        let basis = basis.into();
        assert_eq!(diag.len(), basis.dim());
        Self::from_fn(basis, |i, j| if i == j { diag[i] } else { Complex64::new(0.0, 0.0) })
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    /// Same entries under a different basis tag of equal dimension.
    pub fn with_basis(self, basis: impl Into<Basis>) -> Result<Self, FockError> {
        Self::new(basis, self.entries)
    }

    pub fn map_entries(&self, f: impl FnMut(Complex64) -> Complex64) -> Self {
        Self::from_parts(self.basis, self.entries.map(f))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_parts(self.basis, &self.entries * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_parts(self.basis, self.entries.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self::from_parts(self.basis, self.entries.transpose())
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius(&self.entries)
    }

    /// Largest absolute column sum.
    pub fn one_norm(&self) -> f64 {
        one_norm(&self.entries)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn check_same_dim(&self, other: &Self) -> Result<(), FockError> {
        if self.dim() != other.dim() {
            return Err(FockError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    pub fn try_product(&self, other: &Self) -> Result<Self, FockError> {
        self.check_same_dim(other)?;
        Ok(Self::from_parts(self.basis, &self.entries * &other.entries))
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self, FockError> {
        self.check_same_dim(other)?;
        let ab = &self.entries * &other.entries;
        let ba = &other.entries * &self.entries;
        Ok(Self::from_parts(self.basis, ab - ba))
    }

    /// `‖A − A†‖_F / max(1, ‖A‖_F)`.
    pub fn residual_hermiticity(&self) -> f64 {
        residual_hermiticity(&self.entries)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.residual_hermiticity() <= tol
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let e = (&self.entries + self.entries.adjoint()) * Complex64::new(0.5, 0.0);
        Self::from_parts(self.basis, e)
    }

    /// Top-left `size × size` block.
    pub fn window(&self, size: usize) -> DMatrix<Complex64> {
        let k = size.min(self.dim());
        self.entries.view((0, 0), (k, k)).into_owned()
    }

    pub fn apply(&self, v: &nalgebra::DVector<Complex64>) -> nalgebra::DVector<Complex64> {
        &self.entries * v
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..n).all(|i| i == j || self.entries[(i, j)] == Complex64::new(0.0, 0.0)))
    }
}

pub fn frobenius(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn one_norm(m: &DMatrix<Complex64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn residual_hermiticity(m: &DMatrix<Complex64>) -> f64 {
    let diff = m - m.adjoint();
    frobenius(&diff) / frobenius(m).max(1.0)
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix::from_parts(self.basis, &self.entries + &rhs.entries)
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix::from_parts(self.basis, &self.entries - &rhs.entries)
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix::from_parts(self.basis, &self.entries * &rhs.entries)
    }
}

impl Neg for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn neg(self) -> OperatorMatrix {
        OperatorMatrix::from_parts(self.basis, -&self.entries)
    }
}
