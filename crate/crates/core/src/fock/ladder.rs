use num_complex::Complex64;

use super::{FockBasis, OperatorMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `a|n⟩ = √n |n−1⟩`, compressed to the retained levels.
pub fn build_annihilation(basis: FockBasis) -> OperatorMatrix {
    OperatorMatrix::from_fn(basis, |i, j| {
        if j == i + 1 {
            Complex64::new((j as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

/// `a†|n⟩ = √(n+1) |n+1⟩`.
pub fn build_creation(basis: FockBasis) -> OperatorMatrix {
    build_annihilation(basis).adjoint()
}

/// Number operator `a†a = diag(0, 1, …, N−1)`.
pub fn build_number(basis: FockBasis) -> OperatorMatrix {
    OperatorMatrix::from_fn(basis, |i, j| {
        if i == j {
            Complex64::new(i as f64, 0.0)
        } else {
            ZERO
        }
    })
}

/// `x = (a + a†)/√2`.
pub fn build_position(basis: FockBasis) -> OperatorMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    OperatorMatrix::from_fn(basis, |i, j| {
        if j == i + 1 {
            Complex64::new(s * (j as f64).sqrt(), 0.0)
        } else if i == j + 1 {
            Complex64::new(s * (i as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

/// `p = (a − a†)/(i√2)`.
pub fn build_momentum(basis: FockBasis) -> OperatorMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    OperatorMatrix::from_fn(basis, |i, j| {
        if j == i + 1 {
            Complex64::new(0.0, -s * (j as f64).sqrt())
        } else if i == j + 1 {
            Complex64::new(0.0, s * (i as f64).sqrt())
        } else {
            ZERO
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn basis(n: usize) -> FockBasis {
        FockBasis::new(n).unwrap()
    }

    #[test]
    fn annihilation_small() {
        let a = build_annihilation(basis(3));
        let expected = [[0.0, 1.0, 0.0], [0.0, 0.0, 2f64.sqrt()], [0.0, 0.0, 0.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(a.get(i, j), c(expected[i][j], 0.0));
            }
        }
        let a2 = build_annihilation(basis(2));
        assert_eq!(a2.get(0, 1), c(1.0, 0.0));
        assert_eq!(a2.get(1, 0), c(0.0, 0.0));
        assert!((build_annihilation(basis(4)).get(2, 3).re - 1.7320508).abs() < 1e-7);
    }

    #[test]
    fn creation_is_exact_adjoint() {
        for n in 2..12 {
            let a = build_annihilation(basis(n));
            let ad = build_creation(basis(n));
            assert_eq!(ad, a.adjoint());
        }
        let ad = build_creation(basis(3));
        assert_eq!(ad.get(1, 0), c(1.0, 0.0));
        assert_eq!(ad.get(2, 1), c(2f64.sqrt(), 0.0));
        assert_eq!(build_creation(basis(2)).get(1, 0), c(1.0, 0.0));
    }

    #[test]
    fn position_and_momentum_two_levels() {
        let x = build_position(basis(2));
        assert_eq!(x.get(0, 1), c(FRAC_1_SQRT_2, 0.0));
        assert_eq!(x.get(1, 0), c(FRAC_1_SQRT_2, 0.0));
        let p = build_momentum(basis(2));
        assert_eq!(p.get(0, 1), c(0.0, -FRAC_1_SQRT_2));
        assert_eq!(p.get(1, 0), c(0.0, FRAC_1_SQRT_2));
        assert_eq!(x.residual_hermiticity(), 0.0);
        assert_eq!(p.residual_hermiticity(), 0.0);
    }

    #[test]
    fn position_matches_ladder_combination() {
        let b = basis(9);
        let a = build_annihilation(b);
        let ad = build_creation(b);
        let x = (&a + &ad).scale_real(FRAC_1_SQRT_2);
        let p = (&a - &ad).scale(c(0.0, -FRAC_1_SQRT_2));
        assert!((&x - &build_position(b)).max_abs() < 1e-15);
        assert!((&p - &build_momentum(b)).max_abs() < 1e-15);
    }

    // Oracle: explicit triple loop, independent of nalgebra's product.
    fn naive_commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Vec<Vec<Complex64>> {
        let n = a.dim();
        let mut out = vec![vec![c(0.0, 0.0); n]; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    out[i][j] += a.get(i, k) * b.get(k, j) - b.get(i, k) * a.get(k, j);
                }
            }
        }
        out
    }

    #[test]
    fn ladder_commutator_truncation_defect() {
        let b = basis(4);
        let comm = build_annihilation(b)
            .commutator(&build_creation(b))
            .unwrap();
        let oracle = naive_commutator(&build_annihilation(b), &build_creation(b));
        let expected = [1.0, 1.0, 1.0, -3.0];
        for i in 0..4 {
            for j in 0..4 {
                let e = if i == j { expected[i] } else { 0.0 };
                assert!((comm.get(i, j) - c(e, 0.0)).norm() < 1e-14);
                assert!((oracle[i][j] - comm.get(i, j)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn canonical_commutator_three_levels() {
        let b = basis(3);
        let comm = build_momentum(b).commutator(&build_position(b)).unwrap();
        let expected = [1.0, 1.0, -2.0];
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { c(0.0, -expected[i]) } else { c(0.0, 0.0) };
                assert!((comm.get(i, j) - e).norm() < 1e-14, "({i},{j})");
            }
        }
    }

    #[test]
    fn canonical_commutator_holds_away_from_edge() {
        for n in [2usize, 5, 16, 33] {
            let b = basis(n);
            let p = build_momentum(b);
            let x = build_position(b);
            let oracle = naive_commutator(&p, &x);
            for i in 0..n - 1 {
                for j in 0..n - 1 {
                    let target = if i == j { c(0.0, -1.0) } else { c(0.0, 0.0) };
                    assert!((oracle[i][j] - target).norm() < 1e-13);
                }
            }
            // the defect sits in the last diagonal entry: −i(1 − N)
            assert!((oracle[n - 1][n - 1] - c(0.0, n as f64 - 1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn number_operator_equals_product() {
        let b = basis(7);
        let prod = &build_creation(b) * &build_annihilation(b);
        assert!((&prod - &build_number(b)).max_abs() < 1e-14);
    }
}
