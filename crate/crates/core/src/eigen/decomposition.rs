use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector, DVectorView};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::balance::balance;
use super::hessenberg::reduce_to_hessenberg;
use super::schur::{hessenberg_qr, triangular_eigenvectors};
use super::EigenError;
use crate::fock::operator::frobenius;
use crate::fock::{Basis, OperatorMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenOptions {
    pub balance: bool,
    /// QR sweep budget per matrix row.
    pub sweeps_per_row: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            balance: true,
            sweeps_per_row: 30,
        }
    }
}

/// Eigenvalues with unit-norm eigenvectors from one side of the problem.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub eigenvalues: Vec<Complex64>,
    /// Columns are unit vectors.
    pub vectors: DMatrix<Complex64>,
    pub residuals: Vec<f64>,
}

pub(crate) fn spectral_order(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn sorted_permutation(values: &[Complex64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| spectral_order(&values[i], &values[j]).then(i.cmp(&j)));
    idx
}

fn schur_of(h: &DMatrix<Complex64>, opts: &EigenOptions, want_vectors: bool) -> Result<SchurParts, EigenError> {
    let n = h.nrows();
    let mut a = h.clone();
    let scale = if opts.balance { balance(&mut a) } else { vec![1.0; n] };
    let mut z = reduce_to_hessenberg(&mut a, want_vectors);
    let cap = opts.sweeps_per_row * n.max(10);
    match hessenberg_qr(&mut a, z.as_mut(), want_vectors, cap) {
        Ok(_) => Ok(SchurParts { t: a, z, scale }),
        Err(fail) => Err(EigenError::NoConvergence {
            sweeps: cap,
            partial: (fail.unconverged + 1..n).map(|k| a[(k, k)]).collect(),
        }),
    }
}

struct SchurParts {
    t: DMatrix<Complex64>,
    z: Option<DMatrix<Complex64>>,
    scale: Vec<f64>,
}

/// Eigenvalues only, sorted ascending by real part then imaginary part.
pub fn eigenvalues(h: &OperatorMatrix) -> Result<Vec<Complex64>, EigenError> {
    eigenvalues_with(h, &EigenOptions::default())
}

pub fn eigenvalues_with(h: &OperatorMatrix, opts: &EigenOptions) -> Result<Vec<Complex64>, EigenError> {
    let parts = schur_of(h.entries(), opts, false)?;
    let mut vals: Vec<Complex64> = (0..h.dim()).map(|k| parts.t[(k, k)]).collect();
    vals.sort_by(spectral_order);
    Ok(vals)
}

fn right_pairs(h: &DMatrix<Complex64>, opts: &EigenOptions) -> Result<EigenPairs, EigenError> {
    let n = h.nrows();
    let parts = schur_of(h, opts, true)?;
    let z = parts.z.expect("vectors requested");
    let y = triangular_eigenvectors(&parts.t);
    let mut x = z * y;
    for (i, mut row) in x.row_iter_mut().enumerate() {
        row *= Complex64::new(parts.scale[i], 0.0);
    }
    let diag: Vec<Complex64> = (0..n).map(|k| parts.t[(k, k)]).collect();
    let order = sorted_permutation(&diag);
    let mut vectors = DMatrix::<Complex64>::zeros(n, n);
    let mut eigenvalues = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        let mut v = x.column(src).into_owned();
        let norm = v.norm();
        if norm > 0.0 {
            v /= Complex64::new(norm, 0.0);
        }
        let lambda = diag[src];
        residuals.push((h * &v - &v * lambda).norm());
        vectors.set_column(dst, &v);
        eigenvalues.push(lambda);
    }
    Ok(EigenPairs {
        eigenvalues,
        vectors,
        residuals,
    })
}

/// Right eigenpairs `H|R⟩ = λ|R⟩` via balancing, Hessenberg reduction,
/// shifted QR and triangular back substitution.
pub fn eig_right(h: &OperatorMatrix) -> Result<EigenPairs, EigenError> {
    right_pairs(h.entries(), &EigenOptions::default())
}

pub fn eig_right_with(h: &OperatorMatrix, opts: &EigenOptions) -> Result<EigenPairs, EigenError> {
    right_pairs(h.entries(), opts)
}

/// Left eigenpairs `⟨L|H = λ⟨L|`, solved as the right problem of `H†`.
/// Vectors are returned as kets `|L⟩`.
pub fn eig_left(h: &OperatorMatrix) -> Result<EigenPairs, EigenError> {
    eig_left_with(h, &EigenOptions::default())
}

pub fn eig_left_with(h: &OperatorMatrix, opts: &EigenOptions) -> Result<EigenPairs, EigenError> {
    let adj = right_pairs(&h.entries().adjoint(), opts)?;
    let conj: Vec<Complex64> = adj.eigenvalues.iter().map(|z| z.conj()).collect();
    let order = sorted_permutation(&conj);
    let n = conj.len();
    let mut vectors = DMatrix::<Complex64>::zeros(h.dim(), n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &adj.vectors.column(src));
    }
    Ok(EigenPairs {
        eigenvalues: order.iter().map(|&i| conj[i]).collect(),
        vectors,
        residuals: order.iter().map(|&i| adj.residuals[i]).collect(),
    })
}

/// How the free scale of each eigenpair was fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `‖R_n‖ = 1`, `⟨L_n|R_n⟩ = 1`.
    UnitRight,
    /// `⟨R_n|J|R_n⟩ = η_n = ±1`, `⟨L_n|R_n⟩ = 1`.
    Involution,
}

/// Eigenvalues with biorthonormal right and left eigenvectors.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    basis: Basis,
    eigenvalues: Vec<Complex64>,
    right: DMatrix<Complex64>,
    left: DMatrix<Complex64>,
    pair_condition: Vec<f64>,
    residuals: Vec<f64>,
    operator_norm: f64,
    normalization: Normalization,
    eta: Option<Vec<i8>>,
}

impl SpectralDecomposition {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        basis: Basis,
        eigenvalues: Vec<Complex64>,
        right: DMatrix<Complex64>,
        left: DMatrix<Complex64>,
        pair_condition: Vec<f64>,
        residuals: Vec<f64>,
        operator_norm: f64,
    ) -> Self {
        Self {
            basis,
            eigenvalues,
            right,
            left,
            pair_condition,
            residuals,
            operator_norm,
            normalization: Normalization::UnitRight,
            eta: None,
        }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Number of pairs equals the space dimension.
    pub fn is_complete(&self) -> bool {
        self.len() == self.basis.dim()
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn eigenvalue(&self, i: usize) -> Complex64 {
        self.eigenvalues[i]
    }

    pub fn right(&self, i: usize) -> DVectorView<'_, Complex64> {
        self.right.column(i)
    }

    pub fn left(&self, i: usize) -> DVectorView<'_, Complex64> {
        self.left.column(i)
    }

    pub fn right_vectors(&self) -> &DMatrix<Complex64> {
        &self.right
    }

    pub fn left_vectors(&self) -> &DMatrix<Complex64> {
        &self.left
    }

    /// `|⟨L_n|R_n⟩|` of the unit vectors before rescaling.
    pub fn pair_condition(&self) -> &[f64] {
        &self.pair_condition
    }

    /// `‖H R_n − λ_n R_n‖` for unit `R_n`.
    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn operator_norm(&self) -> f64 {
        self.operator_norm
    }

    pub fn max_relative_residual(&self) -> f64 {
        let scale = self.operator_norm.max(f64::MIN_POSITIVE);
        self.residuals.iter().copied().fold(0.0, f64::max) / scale
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// Signs `⟨R_n|J|R_n⟩` recorded by [`Self::normalize_with_involution`].
    pub fn eta(&self) -> Option<&[i8]> {
        self.eta.as_deref()
    }

    /// `⟨L_i|R_j⟩`.
    pub fn overlap_matrix(&self) -> DMatrix<Complex64> {
        self.left.adjoint() * &self.right
    }

    /// `max_{i,j<k} |⟨L_i|R_j⟩ − δ_ij|`.
    pub fn biorthogonality_defect(&self, k: usize) -> f64 {
        let k = k.min(self.len());
        let l = self.left.columns(0, k);
        let r = self.right.columns(0, k);
        let g = l.adjoint() * r;
        let mut worst: f64 = 0.0;
        for i in 0..k {
            for j in 0..k {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    /// `Σ_n λ_n |R_n⟩⟨L_n|`.
    pub fn reconstruct(&self) -> OperatorMatrix {
        let mut scaled = self.right.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= self.eigenvalues[k];
        }
        OperatorMatrix::from_parts(self.basis, scaled * self.left.adjoint())
    }

    /// Subset of pairs, in the given order.
    pub fn select(&self, indices: &[usize]) -> Self {
        let n = self.right.nrows();
        let mut right = DMatrix::zeros(n, indices.len());
        let mut left = DMatrix::zeros(n, indices.len());
        for (dst, &src) in indices.iter().enumerate() {
            right.set_column(dst, &self.right.column(src));
            left.set_column(dst, &self.left.column(src));
        }
        Self {
            basis: self.basis,
            eigenvalues: indices.iter().map(|&i| self.eigenvalues[i]).collect(),
            right,
            left,
            pair_condition: indices.iter().map(|&i| self.pair_condition[i]).collect(),
            residuals: indices.iter().map(|&i| self.residuals[i]).collect(),
            operator_norm: self.operator_norm,
            normalization: self.normalization,
            eta: self.eta.as_ref().map(|e| indices.iter().map(|&i| e[i]).collect()),
        }
    }

    /// Pairs whose eigenvalue satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(Complex64) -> bool) -> Self {
        let idx: Vec<usize> = (0..self.len()).filter(|&i| keep(self.eigenvalues[i])).collect();
        self.select(&idx)
    }

    /// Rescale every pair so that `⟨R_n|J|R_n⟩ = η_n ∈ {±1}` while keeping
    /// `⟨L_n|R_n⟩ = 1`. Fails on a `J`-neutral vector (`|⟨R|J|R⟩|` below
    /// `neutral_tol` for unit `R`), which is what a non-real eigenvalue of a
    /// `J`-Hermitian matrix produces.
    pub fn normalize_with_involution(&self, j: &OperatorMatrix, neutral_tol: f64) -> Result<Self, EigenError> {
        let mut out = self.clone();
        let mut eta = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            let r = self.right.column(i);
            let rn2 = r.norm_squared();
            let s = r.dotc(&(j.entries() * r)).re;
            if !(s.abs() > neutral_tol * rn2) {
                return Err(EigenError::InvolutionNeutral {
                    index: i,
                    eigenvalue: self.eigenvalues[i],
                    value: s / rn2,
                });
            }
            let f = s.abs().sqrt();
            out.right.column_mut(i).scale_mut(1.0 / f);
            out.left.column_mut(i).scale_mut(f);
            eta.push(if s > 0.0 { 1 } else { -1 });
        }
        out.normalization = Normalization::Involution;
        out.eta = Some(eta);
        Ok(out)
    }
}

fn smallest_singular_value(g: &DMatrix<Complex64>) -> f64 {
    let big = g.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if !(big > 1e-300 && big.is_finite()) {
        return 0.0;
    }
    nalgebra::SVD::try_new(g / Complex64::new(big, 0.0), false, false, f64::EPSILON, 200)
        .map_or(0.0, |svd| svd.singular_values.min() * big)
}

fn spectral_diameter(values: &[Complex64]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}

fn clusters(values: &[Complex64], tol: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    // sorted by real part: only look ahead while the real gap is within tol
    for i in 0..n {
        for j in i + 1..n {
            if values[j].re - values[i].re > tol {
                break;
            }
            if (values[i] - values[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(i);
    }
    groups
}

/// Tolerances for [`biorthogonal_pair`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairingOptions {
    /// Minimum `|⟨L|R⟩|` of unit vectors (smallest singular value of the
    /// overlap block for clusters).
    pub pairing_tol: f64,
    /// Eigenvalue matching radius relative to the spectral diameter.
    pub match_rel: f64,
}

impl Default for PairingOptions {
    fn default() -> Self {
        Self {
            pairing_tol: 1e-7,
            match_rel: 1e-6,
        }
    }
}

/// Match right and left eigenpairs by nearest eigenvalue and rescale the
/// left vectors so that `⟨L_i|R_j⟩ = δ_ij`.
///
/// Eigenvalues closer than the matching radius form a cluster whose left
/// block is biorthogonalized against the right block as a whole.
pub fn biorthogonal_pair(
    basis: Basis,
    operator_norm: f64,
    right: &EigenPairs,
    left: &EigenPairs,
    opts: &PairingOptions,
) -> Result<SpectralDecomposition, EigenError> {
    let n = right.eigenvalues.len();
    if left.eigenvalues.len() != n {
        return Err(EigenError::LengthMismatch {
            right: n,
            left: left.eigenvalues.len(),
        });
    }
    pair_against(basis, operator_norm, right, left, opts)
}

/// Pairs every right eigenpair with one of `left`, which may hold more.
fn pair_against(
    basis: Basis,
    operator_norm: f64,
    right: &EigenPairs,
    left: &EigenPairs,
    opts: &PairingOptions,
) -> Result<SpectralDecomposition, EigenError> {
    let n = right.eigenvalues.len();
    let mut scale = spectral_diameter(&left.eigenvalues);
    if scale == 0.0 {
        scale = operator_norm.max(left.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    let match_tol = opts.match_rel * scale.max(f64::MIN_POSITIVE);

    let mut used = vec![false; left.eigenvalues.len()];
    let mut partner = vec![0usize; n];
    for i in 0..n {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..left.eigenvalues.len() {
            if used[j] {
                continue;
            }
            let d = (right.eigenvalues[i] - left.eigenvalues[j]).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        match best {
            Some((j, d)) if d <= match_tol => {
                used[j] = true;
                partner[i] = j;
            }
            other => {
                return Err(EigenError::Unmatched {
                    index: i,
                    eigenvalue: right.eigenvalues[i],
                    distance: other.map_or(f64::INFINITY, |(_, d)| d),
                });
            }
        }
    }

    let dim = right.vectors.nrows();
    let mut left_out = DMatrix::<Complex64>::zeros(dim, n);
    let mut pair_condition = vec![0.0; n];
    for group in clusters(&right.eigenvalues, match_tol) {
        let m = group.len();
        let r_block = DMatrix::from_fn(dim, m, |row, c| right.vectors[(row, group[c])]);
        let l_block = DMatrix::from_fn(dim, m, |row, c| left.vectors[(row, partner[group[c]])]);
        let g = l_block.adjoint() * &r_block;
        let condition = if m == 1 { g[(0, 0)].norm() } else { smallest_singular_value(&g) };
        if !(condition >= opts.pairing_tol) {
            return Err(EigenError::QuasiDefective {
                index: group[0],
                eigenvalue: right.eigenvalues[group[0]],
                overlap: condition,
            });
        }
        let ginv = g.try_inverse().ok_or(EigenError::QuasiDefective {
            index: group[0],
            eigenvalue: right.eigenvalues[group[0]],
            overlap: 0.0,
        })?;
        let l_new = l_block * ginv.adjoint();
        for (c, &i) in group.iter().enumerate() {
            left_out.set_column(i, &l_new.column(c));
            pair_condition[i] = condition;
        }
    }

    Ok(SpectralDecomposition::from_parts(
        basis,
        right.eigenvalues.clone(),
        right.vectors.clone(),
        left_out,
        pair_condition,
        right.residuals.clone(),
        operator_norm,
    ))
}

/// Full biorthogonal eigensystem of a dense matrix.
pub fn decompose(h: &OperatorMatrix, opts: &PairingOptions) -> Result<SpectralDecomposition, EigenError> {
    decompose_with(h, opts, &EigenOptions::default())
}

pub fn decompose_with(
    h: &OperatorMatrix,
    pairing: &PairingOptions,
    eigen: &EigenOptions,
) -> Result<SpectralDecomposition, EigenError> {
    let right = eig_right_with(h, eigen)?;
    let left = eig_left_with(h, eigen)?;
    biorthogonal_pair(h.basis(), frobenius(h.entries()), &right, &left, pairing)
}

fn head(pairs: &EigenPairs, k: usize) -> EigenPairs {
    EigenPairs {
        eigenvalues: pairs.eigenvalues[..k].to_vec(),
        vectors: pairs.vectors.columns(0, k).into_owned(),
        residuals: pairs.residuals[..k].to_vec(),
    }
}

/// Biorthogonal system of the `count` lowest eigenvalues only; the pairing
/// checks never see the discarded upper part of the spectrum.
pub fn decompose_lowest(
    h: &OperatorMatrix,
    count: usize,
    opts: &PairingOptions,
) -> Result<SpectralDecomposition, EigenError> {
    let right = eig_right(h)?;
    let left = eig_left(h)?;
    let k = count.min(right.eigenvalues.len());
    pair_against(h.basis(), frobenius(h.entries()), &head(&right, k), &left, opts)
}

/// Longest spectral prefix free of quasi-defective pairs.
///
/// Pairing stops just below the lowest eigenvalue whose overlap falls under
/// `pairing_tol`; the result is complete only if no pair failed.
pub fn decompose_conditioned(h: &OperatorMatrix, opts: &PairingOptions) -> Result<SpectralDecomposition, EigenError> {
    let right = eig_right(h)?;
    let left = eig_left(h)?;
    let norm = frobenius(h.entries());
    let mut k = right.eigenvalues.len();
    loop {
        match pair_against(h.basis(), norm, &head(&right, k), &left, opts) {
            Err(EigenError::QuasiDefective { index, .. }) if index < k => k = index,
            other => return other,
        }
    }
}

/// `‖H v − λ v‖ / ‖v‖`.
pub fn residual(h: &OperatorMatrix, lambda: Complex64, v: &DVector<Complex64>) -> f64 {
    (h.entries() * v - v * lambda).norm() / v.norm()
}
