use nalgebra::DMatrix;
use num_complex::Complex64;

const RADIX: f64 = 2.0;

/// Diagonal similarity `B = D⁻¹ A D` with power-of-two entries in `D` that
/// equalizes off-diagonal row and column norms. Returns the scaling vector.
pub(crate) fn balance(a: &mut DMatrix<Complex64>) -> Vec<f64> {
    let n = a.nrows();
    let mut scale = vec![1.0; n];
    let radix2 = RADIX * RADIX;
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].l1_norm();
                    r += a[(i, j)].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= radix2;
            }
            g = r * RADIX;
            while c >= g {
                f /= RADIX;
                c /= radix2;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                scale[i] *= f;
                let inv = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= inv;
                    a[(j, i)] *= f;
                }
            }
        }
        if converged {
            break;
        }
    }
    scale
}
