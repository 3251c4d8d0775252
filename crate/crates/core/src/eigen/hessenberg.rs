use nalgebra::DMatrix;
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// In-place unitary reduction `A = Q H Q†` to upper Hessenberg form by
/// Householder reflections. Returns `Q` when requested.
pub(crate) fn reduce_to_hessenberg(a: &mut DMatrix<Complex64>, want_q: bool) -> Option<DMatrix<Complex64>> {
    let n = a.nrows();
    let mut q = want_q.then(|| DMatrix::<Complex64>::identity(n, n));
    if n < 3 {
        return q;
    }
    let mut v = vec![ZERO; n];
    for k in 0..n - 2 {
        let alpha = a[(k + 1, k)];
        let xnorm = (k + 2..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 && alpha.im == 0.0 {
            continue;
        }
        // H = I − τ v v†, H† x = β e₁
        let norm = alpha.norm_sqr().sqrt().hypot(xnorm);
        let beta = -norm.copysign(alpha.re);
        let tau = Complex64::new((beta - alpha.re) / beta, -alpha.im / beta);
        let inv = Complex64::new(1.0, 0.0) / (alpha - beta);
        v[k + 1] = Complex64::new(1.0, 0.0);
        for i in k + 2..n {
            v[i] = a[(i, k)] * inv;
        }
        // left: A ← H† A on rows k+1.., columns k..
        let tau_c = tau.conj();
        for j in k..n {
            let mut s = ZERO;
            for i in k + 1..n {
                s += v[i].conj() * a[(i, j)];
            }
            let s = s * tau_c;
            for i in k + 1..n {
                a[(i, j)] -= v[i] * s;
            }
        }
        // right: A ← A H on all rows, columns k+1..
        for i in 0..n {
            let mut s = ZERO;
            for j in k + 1..n {
                s += a[(i, j)] * v[j];
            }
            let s = s * tau;
            for j in k + 1..n {
                a[(i, j)] -= s * v[j].conj();
            }
        }
        if let Some(q) = q.as_mut() {
            for i in 0..n {
                let mut s = ZERO;
                for j in k + 1..n {
                    s += q[(i, j)] * v[j];
                }
                let s = s * tau;
                for j in k + 1..n {
                    q[(i, j)] -= s * v[j].conj();
                }
            }
        }
        a[(k + 1, k)] = Complex64::new(beta, 0.0);
        for i in k + 2..n {
            a[(i, k)] = ZERO;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reduction_is_unitary_similarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [1usize, 2, 3, 6, 11] {
            let a0 = DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
            let mut h = a0.clone();
            let q = reduce_to_hessenberg(&mut h, true).unwrap();
            for j in 0..n {
                for i in j + 2..n {
                    assert_eq!(h[(i, j)], ZERO);
                }
            }
            let back = &q * &h * q.adjoint();
            assert!((back - &a0).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-13);
            let qq = q.adjoint() * &q;
            assert!((qq - DMatrix::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-13);
        }
    }
}
