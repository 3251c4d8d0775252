//! Closed-form eigenfunctions as polynomial × Gaussian.
//!
//! `R_n` is generated by applying the first-order ladder operator `n` times
//! to the ground-state Gaussian, acting on polynomial coefficients exactly.
//! Normalization uses exact Gaussian moments.

use num_complex::Complex64;
use serde::Serialize;

use super::{ModelError, OscillatorModel};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// `P(x) · exp(−s (x − x₀)² / 2)` with `Re s > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPolynomial {
    /// Ascending powers of `x`.
    pub coeffs: Vec<Complex64>,
    pub width: Complex64,
    pub center: f64,
}

impl GaussianPolynomial {
    pub fn gaussian(width: Complex64, center: f64) -> Self {
        Self {
            coeffs: vec![Complex64::new(1.0, 0.0)],
            width,
            center,
        }
    }

    /// `(u x + v − w d/dx)` applied to `self`.
    pub fn ladder(&self, u: Complex64, v: Complex64, w: Complex64) -> Self {
        let p = &self.coeffs;
        let mut out = vec![ZERO; p.len() + 1];
        let lin = u + w * self.width;
        let cst = v - w * self.width * self.center;
        for (k, &c) in p.iter().enumerate() {
            out[k + 1] += lin * c;
            out[k] += cst * c;
            if k > 0 {
                out[k - 1] -= w * c * k as f64;
            }
        }
        Self {
            coeffs: out,
            width: self.width,
            center: self.center,
        }
    }

    pub fn scaled(&self, k: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
            ..self.clone()
        }
    }

    /// Pointwise complex conjugate for real `x`.
    pub fn conj(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
            width: self.width.conj(),
            center: self.center,
        }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let p = self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * x + c);
        let d = x - self.center;
        p * (-self.width * d * d * 0.5).exp()
    }

    /// `∫ f(x) g(x) dx` over the real line, from exact Gaussian moments.
    pub fn integral_of_product(f: &Self, g: &Self) -> Complex64 {
        let mut prod = vec![ZERO; f.coeffs.len() + g.coeffs.len() - 1];
        for (i, a) in f.coeffs.iter().enumerate() {
            for (j, b) in g.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        let (s1, s2) = (f.width, g.width);
        let (a1, a2) = (f.center, g.center);
        let c = (s1 + s2) * 0.5;
        let b = s1 * a1 + s2 * a2;
        let e = (s1 * a1 * a1 + s2 * a2 * a2) * 0.5;
        let mut m_prev = ZERO;
        let mut m = (Complex64::new(std::f64::consts::PI, 0.0) / c).sqrt() * (b * b / (c * 4.0) - e).exp();
        let mut total = ZERO;
        for (k, &p) in prod.iter().enumerate() {
            total += p * m;
            let next = (b * m + m_prev * k as f64) / (c * 2.0);
            m_prev = m;
            m = next;
        }
        total
    }
}

/// Samples of a closed-form eigenfunction on a symmetric grid.
#[derive(Debug, Clone, Serialize)]
pub struct AnalyticEigenfunction {
    pub model: OscillatorModel,
    pub index: usize,
    pub side: Side,
    pub x: Vec<f64>,
    pub spacing: f64,
    pub values: Vec<Complex64>,
    /// Scale applied to the raw ladder polynomial; complex for Swanson.
    pub norm_constant: Complex64,
    #[serde(skip)]
    pub form: GaussianPolynomial,
}

impl AnalyticEigenfunction {
    /// Trapezoidal `∫ conj(L(x)) R(x) dx`.
    pub fn pairing(left: &Self, right: &Self) -> Complex64 {
        let n = left.values.len();
        let mut s = ZERO;
        for k in 0..n {
            let w = if k == 0 || k + 1 == n { 0.5 } else { 1.0 };
            s += left.values[k].conj() * right.values[k] * w;
        }
        s * left.spacing
    }
}

fn raw_forms(model: &OscillatorModel, n: usize) -> (GaussianPolynomial, GaussianPolynomial) {
    let one = Complex64::new(1.0, 0.0);
    match model {
        OscillatorModel::Harmonic { .. } => {
            let mut r = GaussianPolynomial::gaussian(one, 0.0);
            for _ in 0..n {
                r = r.ladder(one, ZERO, one);
            }
            (r.clone(), r)
        }
        OscillatorModel::ExtendedOscillator(s) => {
            // R_n = (x + x₀ − d/dx)^n e^{−(x−x₀)²/2}, L_n(x) = (−1)^n R_n(−x)
            let x0 = std::f64::consts::SQRT_2 / s.beta();
            let mut r = GaussianPolynomial::gaussian(one, x0);
            let mut l = GaussianPolynomial::gaussian(one, -x0);
            for _ in 0..n {
                r = r.ladder(one, Complex64::new(x0, 0.0), one);
                l = l.ladder(one, Complex64::new(-x0, 0.0), one);
            }
            (r, l)
        }
        OscillatorModel::Swanson(s) => {
            // c‡ = e^{iθ}/√2 x − e^{−iθ}/√2 d/dx on e^{−x² e^{2iθ}/2}
            let t = s.theta();
            let u = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, t);
            let w = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, -t);
            let mut r = GaussianPolynomial::gaussian(Complex64::from_polar(1.0, 2.0 * t), 0.0);
            for _ in 0..n {
                r = r.ladder(u, ZERO, w);
            }
            let l = r.conj();
            (r, l)
        }
    }
}

/// Sample `R_n` or `L_n` on `points` equally spaced nodes of `[−L, L]`,
/// scaled so that `∫ conj(L_n) R_n dx = 1`.
pub fn eval_eigenfunction(
    model: &OscillatorModel,
    n: usize,
    side: Side,
    half_width: f64,
    points: usize,
) -> Result<AnalyticEigenfunction, ModelError> {
    if !(half_width.is_finite() && half_width > 0.0) || points < 3 {
        return Err(ModelError::InvalidParameter {
            field: "grid",
            value: half_width,
            reason: "needs a positive half width and at least 3 points",
        });
    }
    let (r, l) = raw_forms(model, n);
    let pairing = GaussianPolynomial::integral_of_product(&l.conj(), &r);
    let k = pairing.sqrt().inv();
    let form = match side {
        Side::Right => r.scaled(k),
        Side::Left => l.scaled(k.conj()),
    };
    let spacing = 2.0 * half_width / (points - 1) as f64;
    // mirror the left half so the grid is symmetric about 0 exactly
    let x: Vec<f64> = (0..points)
        .map(|i| {
            let j = i.min(points - 1 - i);
            let xj = if 2 * j + 1 == points { 0.0 } else { -half_width + j as f64 * spacing };
            if j == i { xj } else { -xj }
        })
        .collect();
    let values: Vec<Complex64> = x.iter().map(|&xi| form.eval(xi)).collect();
    let peak = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tail = values[0].norm().max(values[points - 1].norm());
    if !(tail <= 1e-12 * peak) || values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(ModelError::Domain { tail, peak });
    }
    Ok(AnalyticEigenfunction {
        model: *model,
        index: n,
        side,
        x,
        spacing,
        values,
        norm_constant: k,
        form,
    })
}
