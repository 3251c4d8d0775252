//! Matrix exponential by scaling and squaring with diagonal Padé approximants.
//!
//! Degree selection and the scaling thresholds follow Higham's 2005 analysis:
//! the smallest Padé degree whose backward-error bound fits the 1-norm of the
//! input is used directly, otherwise degree 13 is applied to `A / 2^s` and the
//! result squared `s` times.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::operator::one_norm;
use super::{FockError, OperatorMatrix};

const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA_13: f64 = 5.371920351148152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Beyond this many squarings the result cannot be represented in f64.
const MAX_SQUARINGS: i32 = 64;

fn cr(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn solve_pade(u: DMatrix<Complex64>, v: DMatrix<Complex64>) -> Result<DMatrix<Complex64>, FockError> {
    let p = &v + &u;
    let q = v - u;
    q.lu()
        .solve(&p)
        .ok_or(FockError::ExpSingularDenominator)
}

fn pade_low(a: &DMatrix<Complex64>, b: &[f64]) -> Result<DMatrix<Complex64>, FockError> {
    let n = a.nrows();
    let ident = DMatrix::<Complex64>::identity(n, n);
    let a2 = a * a;
    // powers of A² up to the needed degree
    let mut pow = ident.clone();
    let mut u_even = ident.clone() * cr(b[1]);
    let mut v = ident * cr(b[0]);
    let m = b.len() - 1;
    let mut k = 2;
    while k <= m {
        pow = &pow * &a2;
        v += &pow * cr(b[k]);
        if k + 1 <= m {
            u_even += &pow * cr(b[k + 1]);
        }
        k += 2;
    }
    let u = a * u_even;
    solve_pade(u, v)
}

fn pade13(a: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>, FockError> {
    let n = a.nrows();
    let ident = DMatrix::<Complex64>::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = &B13;
    let inner_u = &a6 * cr(b[13]) + &a4 * cr(b[11]) + &a2 * cr(b[9]);
    let u = a * (&a6 * inner_u + &a6 * cr(b[7]) + &a4 * cr(b[5]) + &a2 * cr(b[3]) + &ident * cr(b[1]));
    let inner_v = &a6 * cr(b[12]) + &a4 * cr(b[10]) + &a2 * cr(b[8]);
    let v = &a6 * inner_v + &a6 * cr(b[6]) + &a4 * cr(b[4]) + &a2 * cr(b[2]) + ident * cr(b[0]);
    solve_pade(u, v)
}

/// `e^A` for a dense complex matrix.
pub fn expm(a: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>, FockError> {
    let norm = one_norm(a);
    if !norm.is_finite() {
        return Err(FockError::ExpOverflow { norm });
    }
    for (degree, theta) in THETA {
        if norm <= theta {
            let b: &[f64] = match degree {
                3 => &B3,
                5 => &B5,
                7 => &B7,
                _ => &B9,
            };
            return finite_or_overflow(pade_low(a, b)?, norm);
        }
    }
    let s = (norm / THETA_13).log2().ceil().max(0.0) as i32;
    if s > MAX_SQUARINGS {
        return Err(FockError::ExpOverflow { norm });
    }
    let scaled = a * cr(0.5f64.powi(s));
    let mut r = pade13(&scaled)?;
    for _ in 0..s {
        r = &r * &r;
        if r.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(FockError::ExpOverflow { norm });
        }
    }
    finite_or_overflow(r, norm)
}

fn finite_or_overflow(r: DMatrix<Complex64>, norm: f64) -> Result<DMatrix<Complex64>, FockError> {
    if r.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(r)
    } else {
        Err(FockError::ExpOverflow { norm })
    }
}

/// `e^A` carrying the basis tag of `A`.
pub fn matrix_exp(a: &OperatorMatrix) -> Result<OperatorMatrix, FockError> {
    Ok(OperatorMatrix::from_parts(a.basis(), expm(a.entries())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_annihilation, build_creation, FockBasis};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize, frob: f64) -> DMatrix<Complex64> {
        let m = DMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let f = crate::fock::operator::frobenius(&m);
        m * cr(frob / f)
    }

    // Oracle: Taylor series summed until the terms vanish; adequate for small norms.
    fn taylor(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let n = a.nrows();
        let mut term = DMatrix::<Complex64>::identity(n, n);
        let mut sum = term.clone();
        for k in 1..200 {
            term = &term * a * cr(1.0 / k as f64);
            sum += &term;
        }
        sum
    }

    #[test]
    fn zero_and_diagonal() {
        let z = DMatrix::<Complex64>::zeros(4, 4);
        assert_eq!(expm(&z).unwrap(), DMatrix::identity(4, 4));
        let d = [0.3, -1.2, 4.0, 11.0];
        let m = DMatrix::from_fn(4, 4, |i, j| if i == j { cr(d[i]) } else { cr(0.0) });
        let e = expm(&m).unwrap();
        for i in 0..4 {
            assert!((e[(i, i)].re - d[i].exp()).abs() <= 1e-13 * d[i].exp());
            for j in 0..4 {
                if i != j {
                    assert!(e[(i, j)].norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn matches_taylor_across_degree_branches() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &frob in &[1e-3, 0.1, 0.8, 1.9, 4.0, 9.0] {
            let a = random_matrix(&mut rng, 6, frob);
            let e = expm(&a).unwrap();
            let t = taylor(&a);
            let err = crate::fock::operator::frobenius(&(&e - &t)) / crate::fock::operator::frobenius(&t);
            assert!(err < 1e-13, "norm {frob}: {err}");
        }
    }

    #[test]
    fn inverse_pair_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let a = random_matrix(&mut rng, 8, 10.0);
            let prod = expm(&a).unwrap() * expm(&(-&a)).unwrap();
            let err = crate::fock::operator::frobenius(&(prod - DMatrix::identity(8, 8)));
            assert!(err < 1e-10, "{err}");
        }
    }

    #[test]
    fn displacement_bch_factorization() {
        // e^{λ(a†+a)} = e^{λa†} e^{λa} e^{λ²/2} for the untruncated algebra
        let b = FockBasis::new(16).unwrap();
        let lambda = 0.5;
        let a = build_annihilation(b);
        let ad = build_creation(b);
        let lhs = matrix_exp(&(&ad + &a).scale_real(lambda)).unwrap();
        let rhs = &matrix_exp(&ad.scale_real(lambda)).unwrap() * &matrix_exp(&a.scale_real(lambda)).unwrap();
        let rhs = rhs.scale_real((lambda * lambda / 2.0).exp());
        let diff = lhs.window(8) - rhs.window(8);
        assert!(diff.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-10);
    }

    #[test]
    fn overflow_is_reported() {
        let m = DMatrix::from_fn(2, 2, |i, j| if i == j { cr(1000.0) } else { cr(0.0) });
        assert!(matches!(expm(&m), Err(FockError::ExpOverflow { .. })));
        let mut inf = DMatrix::<Complex64>::zeros(2, 2);
        inf[(0, 0)] = cr(1e308) * cr(10.0);
        assert!(matches!(expm(&inf), Err(FockError::ExpOverflow { .. })));
    }

    #[test]
    fn large_norm_hermitian_exponent() {
        // 1-norm around 50: compare against the spectral route
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_matrix(&mut rng, 10, 1.0);
        let h = (&g + g.adjoint()) * cr(0.5);
        let h = &h * cr(50.0 / one_norm(&h));
        let eig = nalgebra::SymmetricEigen::new(h.clone());
        let mut reference = DMatrix::<Complex64>::zeros(10, 10);
        for k in 0..10 {
            let v = eig.eigenvectors.column(k);
            reference += &v * v.adjoint() * cr(eig.eigenvalues[k].exp());
        }
        let e = expm(&h).unwrap();
        let rel = crate::fock::operator::frobenius(&(&e - &reference)) / crate::fock::operator::frobenius(&reference);
        assert!(rel < 1e-12, "{rel}");
    }
}
