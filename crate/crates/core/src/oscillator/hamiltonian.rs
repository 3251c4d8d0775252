use num_complex::Complex64;

use super::{ExtendedOscillatorSpec, SwansonSpec};
use crate::fock::{build_annihilation, build_creation, build_number, FockBasis, OperatorMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn cr(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `diag(n + ½)`.
pub fn build_harmonic(basis: FockBasis) -> OperatorMatrix {
    OperatorMatrix::from_fn(basis, |i, j| if i == j { cr(i as f64 + 0.5) } else { ZERO })
}

pub fn harmonic_spectrum(k: usize) -> Vec<f64> {
    (0..k).map(|n| n as f64 + 0.5).collect()
}

/// Tridiagonal `M_β`: diagonal `(2n+1)β/2`, superdiagonal `+√(n+1)`,
/// subdiagonal `−√(n+1)`.
pub fn build_extended_oscillator(spec: &ExtendedOscillatorSpec) -> OperatorMatrix {
    let beta = spec.beta();
    OperatorMatrix::from_fn(spec.basis(), |i, j| {
        if i == j {
            cr((2 * i + 1) as f64 * beta / 2.0)
        } else if j == i + 1 {
            cr((j as f64).sqrt())
        } else if i == j + 1 {
            cr(-(i as f64).sqrt())
        } else {
            ZERO
        }
    })
}

/// `β a†a + (a − a†) + β/2` assembled from ladder matrices.
pub fn extended_oscillator_from_ladder(spec: &ExtendedOscillatorSpec) -> OperatorMatrix {
    let b = spec.basis();
    let beta = spec.beta();
    let a = build_annihilation(b);
    let ad = build_creation(b);
    let number = &ad * &a;
    let shift = OperatorMatrix::identity(b).scale_real(beta / 2.0);
    &(&number.scale_real(beta) + &(&a - &ad)) + &shift
}

/// `1/β + β(n + ½)` for `n < k`.
pub fn extended_oscillator_spectrum(spec: &ExtendedOscillatorSpec, k: usize) -> Vec<f64> {
    let beta = spec.beta();
    (0..k).map(|n| 1.0 / beta + beta * (n as f64 + 0.5)).collect()
}

/// `tan 2θ / 2`.
pub fn swanson_coupling(theta: f64) -> f64 {
    (2.0 * theta).tan() / 2.0
}

/// `ω = 1 / cos 2θ`.
pub fn swanson_frequency(theta: f64) -> f64 {
    1.0 / (2.0 * theta).cos()
}

/// Pentadiagonal-pattern `M_θ`: diagonal `n + ½`, `iβ̃√((n+1)(n+2))` two
/// places off the diagonal on both sides.
pub fn build_swanson(spec: &SwansonSpec) -> OperatorMatrix {
    let g = swanson_coupling(spec.theta());
    OperatorMatrix::from_fn(spec.basis(), |i, j| {
        if i == j {
            cr(i as f64 + 0.5)
        } else if i.abs_diff(j) == 2 {
            let n = i.min(j) as f64;
            Complex64::new(0.0, g * ((n + 1.0) * (n + 2.0)).sqrt())
        } else {
            ZERO
        }
    })
}

/// `a†a + i(tan 2θ/2)(a†² + a²) + ½` assembled from ladder matrices.
pub fn swanson_from_ladder(spec: &SwansonSpec) -> OperatorMatrix {
    let b = spec.basis();
    let a = build_annihilation(b);
    let ad = build_creation(b);
    let squares = &(&ad * &ad) + &(&a * &a);
    let coupling = squares.scale(Complex64::new(0.0, swanson_coupling(spec.theta())));
    &(&build_number(b) + &coupling) + &OperatorMatrix::identity(b).scale_real(0.5)
}

/// `ω(n + ½)` for `n < k`.
pub fn swanson_spectrum(spec: &SwansonSpec, k: usize) -> Vec<f64> {
    let w = swanson_frequency(spec.theta());
    (0..k).map(|n| w * (n as f64 + 0.5)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn extended_oscillator_small_cases() {
        let m = build_extended_oscillator(&ExtendedOscillatorSpec::new(2.0, 4).unwrap());
        for n in 0..4 {
            assert_eq!(m.get(n, n), cr((2 * n + 1) as f64));
        }
        for n in 0..3 {
            let s = ((n + 1) as f64).sqrt();
            assert_eq!(m.get(n, n + 1), cr(s));
            assert_eq!(m.get(n + 1, n), cr(-s));
        }
        assert_eq!(m.get(0, 2), ZERO);
        let m1 = build_extended_oscillator(&ExtendedOscillatorSpec::new(1.0, 2).unwrap());
        let expected = [[0.5, 1.0], [-1.0, 1.5]];
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(m1.get(i, j), cr(expected[i][j]));
            }
        }
    }

    #[test]
    fn extended_oscillator_two_paths_agree() {
        let spec = ExtendedOscillatorSpec::new(3.0, 16).unwrap();
        let m = build_extended_oscillator(&spec);
        let d = &m - &extended_oscillator_from_ladder(&spec);
        assert!(d.max_abs() <= 8.0 * f64::EPSILON * m.max_abs());
    }

    #[test]
    fn extended_spectrum_values() {
        let s = |b: f64, k| extended_oscillator_spectrum(&ExtendedOscillatorSpec::new(b, 4).unwrap(), k);
        assert_eq!(s(2.0, 3), vec![1.5, 3.5, 5.5]);
        assert_eq!(s(1.0, 2), vec![1.5, 2.5]);
        assert_eq!(s(0.5, 1), vec![2.25]);
    }

    #[test]
    fn swanson_pattern() {
        let theta = 0.3;
        let g = swanson_coupling(theta);
        let m = build_swanson(&SwansonSpec::new(theta, 6).unwrap());
        assert!((m.get(0, 2) - c(0.0, g * 2f64.sqrt())).norm() < 1e-15);
        assert!((m.get(2, 0) - c(0.0, g * 2f64.sqrt())).norm() < 1e-15);
        assert!((m.get(1, 3) - c(0.0, g * 6f64.sqrt())).norm() < 1e-15);
        assert_eq!(m.get(0, 1), ZERO);
        let h0 = build_swanson(&SwansonSpec::new(0.0, 5).unwrap());
        assert_eq!(h0, build_harmonic(FockBasis::new(5).unwrap()));
    }

    #[test]
    fn swanson_two_paths_agree() {
        let spec = SwansonSpec::new(0.3, 16).unwrap();
        let d = &build_swanson(&spec) - &swanson_from_ladder(&spec);
        assert!(d.max_abs() < 1e-14);
    }

    #[test]
    fn swanson_spectrum_values() {
        let s = |t: f64, k| swanson_spectrum(&SwansonSpec::new(t, 4).unwrap(), k);
        let v = s(std::f64::consts::FRAC_PI_6, 3);
        for (a, b) in v.iter().zip([1.0, 3.0, 5.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        assert_eq!(s(0.0, 2), vec![0.5, 1.5]);
        assert!((s(std::f64::consts::FRAC_PI_8, 1)[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn extended_oscillator_is_not_hermitian() {
        let m = build_extended_oscillator(&ExtendedOscillatorSpec::new(2.0, 8).unwrap());
        assert!(m.residual_hermiticity() > 0.1);
    }

    #[test]
    fn large_beta_limit_approaches_scaled_harmonic() {
        // M_β/β → diag(n + ½) as β → ∞
        let spec = ExtendedOscillatorSpec::new(1e8, 6).unwrap();
        let d = &build_extended_oscillator(&spec).scale_real(1e-8) - &build_harmonic(spec.basis());
        assert!(d.max_abs() < 1e-7);
    }
}
