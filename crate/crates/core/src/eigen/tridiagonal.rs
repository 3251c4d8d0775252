//! Complex symmetric tridiagonal eigenproblems.
//!
//! Eigenvalues by implicit QL with complex orthogonal rotations, eigenvectors
//! by inverse iteration on a pivoted tridiagonal LU factorization. Left
//! eigenvectors follow from symmetry: `⟨L| ∝ |R⟩ᵀ`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::decomposition::{spectral_order, SpectralDecomposition};
use super::EigenError;
use crate::fock::{Basis, OperatorMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `T = Tᵀ` with diagonal `diag` and off-diagonal `off`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTridiagonal {
    basis: Basis,
    diag: Vec<Complex64>,
    off: Vec<Complex64>,
}

impl SymmetricTridiagonal {
    pub fn new(basis: Basis, diag: Vec<Complex64>, off: Vec<Complex64>) -> Result<Self, EigenError> {
        if diag.len() != basis.dim() || off.len() + 1 != diag.len() {
            return Err(EigenError::LengthMismatch {
                right: diag.len(),
                left: off.len() + 1,
            });
        }
        Ok(Self { basis, diag, off })
    }

    /// Extract the bands, rejecting matrices that are not complex symmetric
    /// tridiagonal.
    pub fn from_operator(h: &OperatorMatrix) -> Result<Self, EigenError> {
        let n = h.dim();
        let m = h.entries();
        for j in 0..n {
            for i in 0..n {
                let outside = i.abs_diff(j) > 1;
                if (outside && m[(i, j)] != ZERO) || (i == j + 1 && m[(i, j)] != m[(j, i)]) {
                    return Err(EigenError::NotTridiagonal { row: i, col: j });
                }
            }
        }
        let diag = (0..n).map(|k| m[(k, k)]).collect();
        let off = (0..n.saturating_sub(1)).map(|k| m[(k + 1, k)]).collect();
        Ok(Self {
            basis: h.basis(),
            diag,
            off,
        })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[Complex64] {
        &self.diag
    }

    pub fn off(&self) -> &[Complex64] {
        &self.off
    }

    pub fn frobenius_norm(&self) -> f64 {
        let d: f64 = self.diag.iter().map(|z| z.norm_sqr()).sum();
        let e: f64 = self.off.iter().map(|z| z.norm_sqr()).sum();
        (d + 2.0 * e).sqrt()
    }

    pub fn to_operator(&self) -> OperatorMatrix {
        OperatorMatrix::from_fn(self.basis, |i, j| {
            if i == j {
                self.diag[i]
            } else if i == j + 1 {
                self.off[j]
            } else if j == i + 1 {
                self.off[i]
            } else {
                ZERO
            }
        })
    }

    pub fn apply(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        let n = self.dim();
        DVector::from_fn(n, |i, _| {
            let mut s = self.diag[i] * x[i];
            if i > 0 {
                s += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                s += self.off[i] * x[i + 1];
            }
            s
        })
    }

    /// All eigenvalues, sorted ascending by real part then imaginary part.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>, EigenError> {
        let mut d = self.diag.clone();
        let mut e = self.off.clone();
        e.push(ZERO);
        ql_implicit(&mut d, &mut e, 30)?;
        d.sort_by(spectral_order);
        Ok(d)
    }

    /// Eigenpairs for the eigenvalues accepted by `keep`, with
    /// `⟨L_n| = |R_n⟩ᵀ / (R_nᵀR_n)`.
    pub fn decompose_selected(
        &self,
        mut keep: impl FnMut(Complex64) -> bool,
        pairing_tol: f64,
    ) -> Result<SpectralDecomposition, EigenError> {
        let n = self.dim();
        let values: Vec<Complex64> = self.eigenvalues()?.into_iter().filter(|&z| keep(z)).collect();
        let norm = self.frobenius_norm();
        let mut right = DMatrix::<Complex64>::zeros(n, values.len());
        let mut left = DMatrix::<Complex64>::zeros(n, values.len());
        let mut pair_condition = Vec::with_capacity(values.len());
        let mut residuals = Vec::with_capacity(values.len());
        for (k, &lambda) in values.iter().enumerate() {
            let (r, res) = self.inverse_iteration(lambda, norm);
            let rr = r.iter().map(|z| z * z).sum::<Complex64>();
            let cond = rr.norm();
            if !(cond >= pairing_tol) {
                return Err(EigenError::QuasiDefective {
                    index: k,
                    eigenvalue: lambda,
                    overlap: cond,
                });
            }
            let l = r.map(|z| z.conj()) / rr.conj();
            right.set_column(k, &r);
            left.set_column(k, &l);
            pair_condition.push(cond);
            residuals.push(res);
        }
        Ok(SpectralDecomposition::from_parts(
            self.basis,
            values,
            right,
            left,
            pair_condition,
            residuals,
            norm,
        ))
    }

    /// Unit eigenvector for an eigenvalue estimate and its residual.
    fn inverse_iteration(&self, lambda: Complex64, norm: f64) -> (DVector<Complex64>, f64) {
        let n = self.dim();
        let lu = TridiagonalLu::new(self, lambda);
        let mut x = DVector::from_fn(n, |i, _| Complex64::new(1.0 + ((i * 7919) % 13) as f64 / 13.0, 0.0));
        x /= Complex64::new(x.norm(), 0.0);
        let mut best = (x.clone(), f64::INFINITY);
        for _ in 0..6 {
            lu.solve(&mut x);
            let nx = x.norm();
            if !(nx.is_finite() && nx > 0.0) {
                break;
            }
            x /= Complex64::new(nx, 0.0);
            let res = (self.apply(&x) - &x * lambda).norm();
            if res < best.1 {
                best = (x.clone(), res);
            }
            if res <= 4.0 * f64::EPSILON * norm {
                break;
            }
        }
        best
    }
}

/// Implicit QL on `(d, e)` with `e[n−1]` as workspace. Rotations are complex
/// orthogonal (`c² + s² = 1`), so the iteration can break down when
/// `f² + g²` cancels; this is reported rather than pressed on.
fn ql_implicit(d: &mut [Complex64], e: &mut [Complex64], per_value_cap: usize) -> Result<(), EigenError> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].norm() + d[m + 1].norm();
                if e[m].norm() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > per_value_cap {
                return Err(EigenError::NoConvergence {
                    sweeps: per_value_cap,
                    partial: d[..l].to_vec(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (e[l] * 2.0);
            let mut r = (g * g + ONE).sqrt();
            let sr = if (g + r).norm() >= (g - r).norm() { r } else { -r };
            g = d[m] - d[l] + e[l] / (g + sr);
            let (mut s, mut c, mut p) = (ONE, ONE, ZERO);
            let mut i = m;
            let mut restarted = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                let scale = f.norm().max(g.norm());
                r = if scale == 0.0 {
                    ZERO
                } else {
                    let (fs, gs) = (f / scale, g / scale);
                    (fs * fs + gs * gs).sqrt() * scale
                };
                e[i + 1] = r;
                if r.norm() <= f64::EPSILON * scale || scale == 0.0 {
                    if scale != 0.0 && r.norm() > 0.0 && f.norm() > f64::EPSILON * d[i].norm().max(1.0) {
                        return Err(EigenError::TridiagonalBreakdown { index: i });
                    }
                    d[i + 1] -= p;
                    e[m] = ZERO;
                    restarted = true;
                    break;
                }
                s = f / r;
                c = g / r;
                if s.norm().max(c.norm()) > 1e6 {
                    return Err(EigenError::TridiagonalBreakdown { index: i });
                }
                g = d[i + 1] - p;
                r = (d[i] - g) * s + c * b * 2.0;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if restarted {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = ZERO;
        }
    }
    Ok(())
}

/// Partial-pivoting LU of `T − σI` in the layout of the LAPACK tridiagonal
/// factorization: unit lower bidiagonal `L` with row interchanges, upper `U`
/// with two superdiagonals.
struct TridiagonalLu {
    dl: Vec<Complex64>,
    d: Vec<Complex64>,
    du: Vec<Complex64>,
    du2: Vec<Complex64>,
    swap: Vec<bool>,
}

impl TridiagonalLu {
    fn new(t: &SymmetricTridiagonal, shift: Complex64) -> Self {
        let n = t.dim();
        let mut d: Vec<Complex64> = t.diag.iter().map(|&z| z - shift).collect();
        let mut dl = t.off.clone();
        let mut du = t.off.clone();
        let mut du2 = vec![ZERO; n.saturating_sub(2)];
        let mut swap = vec![false; n.saturating_sub(1)];
        let tiny = f64::EPSILON * t.frobenius_norm().max(f64::MIN_POSITIVE);
        for i in 0..n.saturating_sub(1) {
            if d[i].norm() >= dl[i].norm() {
                if d[i] == ZERO {
                    d[i] = Complex64::new(tiny, 0.0);
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swap[i] = true;
            }
        }
        for z in d.iter_mut() {
            if z.norm() < tiny {
                *z = Complex64::new(tiny, 0.0);
            }
        }
        Self { dl, d, du, du2, swap }
    }

    fn solve(&self, b: &mut DVector<Complex64>) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swap[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                let bi = b[i];
                b[i + 1] -= self.dl[i] * bi;
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::decomposition::eigenvalues as dense_eigenvalues;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_tridiagonal(rng: &mut ChaCha8Rng, n: usize) -> SymmetricTridiagonal {
        let diag = (0..n).map(|_| c(rng.random::<f64>() * 4.0 - 2.0, rng.random::<f64>() - 0.5)).collect();
        let off = (0..n - 1).map(|_| c(rng.random::<f64>() + 0.2, rng.random::<f64>() * 0.4 - 0.2)).collect();
        SymmetricTridiagonal::new(Basis::Plain { dim: n }, diag, off).unwrap()
    }

    #[test]
    fn real_laplacian_spectrum() {
        // −u'' with Dirichlet ends: 2 − 2cos(kπ/(n+1))
        let n = 50;
        let t = SymmetricTridiagonal::new(Basis::Plain { dim: n }, vec![c(2.0, 0.0); n], vec![c(-1.0, 0.0); n - 1])
            .unwrap();
        let ev = t.eigenvalues().unwrap();
        for (k, z) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((z - c(exact, 0.0)).norm() < 1e-13, "{k}: {z} vs {exact}");
        }
    }

    #[test]
    fn agrees_with_dense_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2usize, 3, 8, 30, 60] {
            let t = random_tridiagonal(&mut rng, n);
            let fast = t.eigenvalues().unwrap();
            let dense = dense_eigenvalues(&t.to_operator()).unwrap();
            for (a, b) in fast.iter().zip(&dense) {
                assert!((a - b).norm() < 1e-10 * t.frobenius_norm(), "n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn selected_pairs_are_biorthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let t = random_tridiagonal(&mut rng, 40);
        let dec = t.decompose_selected(|z| z.re < 0.0, 1e-10).unwrap();
        assert!(!dec.is_empty());
        assert!(dec.biorthogonality_defect(dec.len()) < 1e-9);
        assert!(dec.max_relative_residual() < 1e-12);
        let h = t.to_operator();
        for k in 0..dec.len() {
            let l = dec.left(k).into_owned();
            let lh = h.entries().adjoint() * &l;
            let res = (lh - &l * dec.eigenvalue(k).conj()).norm() / l.norm();
            assert!(res < 1e-10 * t.frobenius_norm());
        }
    }

    #[test]
    fn rejects_non_tridiagonal() {
        let h = OperatorMatrix::from_real_rows(&[&[1.0, 2.0, 3.0], &[2.0, 1.0, 0.0], &[3.0, 0.0, 1.0]]).unwrap();
        assert!(matches!(
            SymmetricTridiagonal::from_operator(&h),
            Err(EigenError::NotTridiagonal { .. })
        ));
        let h = OperatorMatrix::from_real_rows(&[&[1.0, 2.0], &[1.0, 1.0]]).unwrap();
        assert!(SymmetricTridiagonal::from_operator(&h).is_err());
    }
}
