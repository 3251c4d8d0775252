use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Split of a spectrum into real eigenvalues and conjugate pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealityReport {
    pub real_count: usize,
    pub real_indices: Vec<usize>,
    /// Index pairs `(i, j)` with `λ_j ≈ conj(λ_i)` and `Im λ_i > 0`.
    pub complex_pairs: Vec<(usize, usize)>,
    /// Non-real eigenvalues without a conjugate partner.
    pub unpaired: Vec<usize>,
}

impl RealityReport {
    pub fn all_real(&self) -> bool {
        self.complex_pairs.is_empty() && self.unpaired.is_empty()
    }

    pub fn complex_count(&self) -> usize {
        2 * self.complex_pairs.len() + self.unpaired.len()
    }
}

/// `|Im λ| ≤ im_tol·max(1, |Re λ|)`.
pub fn is_real(z: Complex64, im_tol: f64) -> bool {
    z.im.abs() <= im_tol * z.re.abs().max(1.0)
}

/// Classify eigenvalues as real or as members of conjugate pairs.
pub fn classify_reality(eigenvalues: &[Complex64], im_tol: f64) -> RealityReport {
    let mut real_indices = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for (i, &z) in eigenvalues.iter().enumerate() {
        if is_real(z, im_tol) {
            real_indices.push(i);
        } else if z.im > 0.0 {
            upper.push(i);
        } else {
            lower.push(i);
        }
    }
    let mut taken = vec![false; lower.len()];
    let mut complex_pairs = Vec::new();
    let mut unpaired = Vec::new();
    for &i in &upper {
        let target = eigenvalues[i].conj();
        let tol = 1e-6 * eigenvalues[i].norm().max(1.0);
        let best = lower
            .iter()
            .enumerate()
            .filter(|(k, _)| !taken[*k])
            .map(|(k, &j)| (k, j, (eigenvalues[j] - target).norm()))
            .min_by(|a, b| a.2.total_cmp(&b.2));
        match best {
            Some((k, j, d)) if d <= tol => {
                taken[k] = true;
                complex_pairs.push((i, j));
            }
            _ => unpaired.push(i),
        }
    }
    unpaired.extend(lower.iter().zip(&taken).filter(|(_, t)| !**t).map(|(&j, _)| j));
    unpaired.sort_unstable();
    RealityReport {
        real_count: real_indices.len(),
        real_indices,
        complex_pairs,
        unpaired,
    }
}
