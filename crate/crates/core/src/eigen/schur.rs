//! Complex Schur form of an upper Hessenberg matrix by implicitly shifted QR.
//!
//! Single-shift bulge chasing with Givens rotations, Wilkinson shifts, the
//! Ahues–Tisseur deflation test and exceptional shifts after 10 and 20
//! stagnant sweeps.

use nalgebra::DMatrix;
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[inline]
fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Rotation `G = [[c, s], [−s̄, c]]` with `G·[x; y] = [r; 0]`.
#[inline]
pub(crate) fn givens(x: Complex64, y: Complex64) -> (f64, Complex64, Complex64) {
    if y == ZERO {
        return (1.0, ZERO, x);
    }
    if x == ZERO {
        let ay = y.norm();
        return (0.0, y.conj() / ay, Complex64::new(ay, 0.0));
    }
    let ax = x.norm();
    let norm = ax.hypot(y.norm());
    let phase = x / ax;
    (ax / norm, phase * y.conj() / norm, phase * norm)
}

/// Failure to converge; `unconverged` is the last active row, eigenvalues
/// below it sit on the diagonal of `h`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct NoConvergence {
    pub unconverged: usize,
}

fn wilkinson_shift(h: &DMatrix<Complex64>, i: usize) -> Complex64 {
    let mut t = h[(i, i)];
    let u = h[(i - 1, i)].sqrt() * h[(i, i - 1)].sqrt();
    let s = cabs1(u);
    if s != 0.0 {
        let x = (h[(i - 1, i - 1)] - t) * 0.5;
        let sx = cabs1(x);
        let s = s.max(sx);
        let xs = x / s;
        let us = u / s;
        let mut y = (xs * xs + us * us).sqrt() * s;
        if sx > 0.0 {
            let xn = x / sx;
            if xn.re * y.re + xn.im * y.im < 0.0 {
                y = -y;
            }
        }
        t -= u * (u / (x + y));
    }
    t
}

/// Reduce Hessenberg `h` to upper triangular `T` (when `want_t`) with the
/// rotations accumulated into `z`. Without `want_t` only the diagonal is
/// meaningful on return.
pub(crate) fn hessenberg_qr(
    h: &mut DMatrix<Complex64>,
    mut z: Option<&mut DMatrix<Complex64>>,
    want_t: bool,
    max_sweeps: usize,
) -> Result<usize, NoConvergence> {
    let n = h.nrows();
    if n == 0 {
        return Ok(0);
    }
    for j in 0..n {
        for i in j + 2..n {
            h[(i, j)] = ZERO;
        }
    }
    let ulp = f64::EPSILON;
    let smlnum = f64::MIN_POSITIVE * (n as f64 / ulp);
    let nz = z.as_ref().map_or(0, |z| z.nrows());
    let mut total = 0usize;
    let mut i = n - 1;
    loop {
        let mut its = 0usize;
        let l = loop {
            // deflation search from the bottom of the active block
            let mut k = i;
            while k > 0 {
                let sub = h[(k, k - 1)];
                if cabs1(sub) <= smlnum {
                    break;
                }
                let mut tst = cabs1(h[(k - 1, k - 1)]) + cabs1(h[(k, k)]);
                if tst == 0.0 {
                    if k >= 2 {
                        tst += h[(k - 1, k - 2)].re.abs();
                    }
                    if k + 1 <= i {
                        tst += h[(k + 1, k)].re.abs();
                    }
                }
                if cabs1(sub) <= ulp * tst {
                    let ab = cabs1(sub).max(cabs1(h[(k - 1, k)]));
                    let ba = cabs1(sub).min(cabs1(h[(k - 1, k)]));
                    let diff = h[(k - 1, k - 1)] - h[(k, k)];
                    let aa = cabs1(h[(k, k)]).max(cabs1(diff));
                    let bb = cabs1(h[(k, k)]).min(cabs1(diff));
                    let s = aa + ab;
                    if ba * (ab / s) <= smlnum.max(ulp * (bb * (aa / s))) {
                        break;
                    }
                }
                k -= 1;
            }
            let l = k;
            if l > 0 {
                h[(l, l - 1)] = ZERO;
            }
            if l >= i {
                break l;
            }
            if total >= max_sweeps {
                return Err(NoConvergence { unconverged: i });
            }
            let shift = match its {
                10 => Complex64::new(0.75 * h[(l + 1, l)].re.abs(), 0.0) + h[(l, l)],
                20 => Complex64::new(0.75 * h[(i, i - 1)].re.abs(), 0.0) + h[(i, i)],
                _ => wilkinson_shift(h, i),
            };
            let (jlast, ifirst) = if want_t { (n - 1, 0) } else { (i, l) };
            let mut x = h[(l, l)] - shift;
            let mut y = h[(l + 1, l)];
            for k in l..i {
                if k > l {
                    x = h[(k, k - 1)];
                    y = h[(k + 1, k - 1)];
                }
                let (c, s, r) = givens(x, y);
                let sc = s.conj();
                if k > l {
                    h[(k, k - 1)] = r;
                    h[(k + 1, k - 1)] = ZERO;
                }
                for j in k..=jlast {
                    let h1 = h[(k, j)];
                    let h2 = h[(k + 1, j)];
                    h[(k, j)] = h1 * c + s * h2;
                    h[(k + 1, j)] = h2 * c - sc * h1;
                }
                for r in ifirst..=(k + 2).min(i) {
                    let h1 = h[(r, k)];
                    let h2 = h[(r, k + 1)];
                    h[(r, k)] = h1 * c + h2 * sc;
                    h[(r, k + 1)] = h2 * c - h1 * s;
                }
                if let Some(z) = z.as_deref_mut() {
                    for r in 0..nz {
                        let z1 = z[(r, k)];
                        let z2 = z[(r, k + 1)];
                        z[(r, k)] = z1 * c + z2 * sc;
                        z[(r, k + 1)] = z2 * c - z1 * s;
                    }
                }
            }
            its += 1;
            total += 1;
        };
        if l == 0 {
            break;
        }
        i = l - 1;
    }
    Ok(total)
}

/// Eigenvectors of upper triangular `t` by back substitution; column `k`
/// solves `(T − t_kk) y = 0` with `y_k = 1`.
pub(crate) fn triangular_eigenvectors(t: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = t.nrows();
    let ulp = f64::EPSILON;
    let smlnum = f64::MIN_POSITIVE * (n as f64 / ulp);
    let mut y = DMatrix::<Complex64>::zeros(n, n);
    let mut work = vec![ZERO; n];
    for k in 0..n {
        let lambda = t[(k, k)];
        let smin = (ulp * cabs1(lambda)).max(smlnum);
        work[k] = Complex64::new(1.0, 0.0);
        for i in 0..k {
            work[i] = -t[(i, k)];
        }
        for i in (0..k).rev() {
            let mut d = t[(i, i)] - lambda;
            if cabs1(d) < smin {
                d = Complex64::new(smin, 0.0);
            }
            work[i] /= d;
            // keep the partial solution representable
            let big = cabs1(work[i]);
            if big > 1e200 {
                let f = 1.0 / big;
                for w in work.iter_mut().take(k + 1) {
                    *w *= f;
                }
            }
            let wi = work[i];
            for r in 0..i {
                work[r] -= t[(r, i)] * wi;
            }
        }
        for i in 0..=k {
            y[(i, k)] = work[i];
        }
    }
    y
}
