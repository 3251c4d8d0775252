//! Every numerical threshold used by the checks, in one record.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eigen::PairingOptions;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Minimum `|⟨L|R⟩|` of unit eigenvectors.
    pub pairing: f64,
    /// Eigenvalue matching radius relative to the spectral diameter.
    pub matching: f64,
    /// Eigenpair residual relative to `‖H‖`.
    pub eigen_residual: f64,
    /// Reality classification of oscillator spectra.
    pub im_tol: f64,
    /// Bound-state filter on the undeformed and shifted grids.
    pub pt_im_tol: f64,
    /// Bound-state filter on the complex-scaled grid.
    pub pt_scale_im_tol: f64,
    /// Boundary mass allowed for a bound state.
    pub loc_tol: f64,
    /// Verification window as a fraction of the dimension.
    pub window_fraction: f64,
    pub residual_jh: f64,
    pub residual_qh: f64,
    pub residual_bender: f64,
    pub residual_jqj: f64,
    pub biorthogonality: f64,
    pub eta_offdiag: f64,
    /// `⟨R|J|R⟩` below this (unit `R`) counts as `J`-neutral.
    pub involution_neutral: f64,
    pub metric_asymmetry: f64,
    pub hermiticity: f64,
    pub counterpart_diagonal: f64,
    pub probability_sum: f64,
    pub probability_floor: f64,
    /// Fraction of a state's norm allowed outside the window.
    pub support_leak: f64,
    pub beta_floor: f64,
    pub theta_ceiling: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            pairing: 1e-7,
            matching: 1e-6,
            eigen_residual: 1e-10,
            im_tol: 1e-8,
            pt_im_tol: 1e-6,
            pt_scale_im_tol: 1e-3,
            loc_tol: 1e-6,
            window_fraction: 0.25,
            residual_jh: 1e-14,
            residual_qh: 1e-7,
            residual_bender: 1e-14,
            residual_jqj: 1e-7,
            biorthogonality: 1e-8,
            eta_offdiag: 1e-8,
            involution_neutral: 1e-8,
            metric_asymmetry: 1e-10,
            hermiticity: 1e-8,
            counterpart_diagonal: 1e-6,
            probability_sum: 1e-8,
            probability_floor: 1e-12,
            support_leak: 1e-12,
            beta_floor: 0.75,
            theta_ceiling: 0.55,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ToleranceError {
    #[error("override `{0}` is not of the form KEY=VALUE")]
    Syntax(String),
    #[error("unknown tolerance `{0}`")]
    UnknownKey(String),
    #[error("tolerance `{key}` needs a positive finite number, got `{value}`")]
    BadValue { key: String, value: String },
}

impl Tolerances {
    /// Apply one `KEY=VALUE` override.
    pub fn apply_override(&mut self, spec: &str) -> Result<(), ToleranceError> {
        let (key, value) = spec.split_once('=').ok_or_else(|| ToleranceError::Syntax(spec.to_string()))?;
        let key = key.trim();
        let bad = || ToleranceError::BadValue {
            key: key.to_string(),
            value: value.to_string(),
        };
        let v: f64 = value.trim().parse().map_err(|_| bad())?;
        if !(v.is_finite() && v > 0.0) {
            return Err(bad());
        }
        let mut map = match serde_json::to_value(*self) {
            Ok(serde_json::Value::Object(m)) => m,
            _ => unreachable!("tolerances serialize to an object"),
        };
        if !map.contains_key(key) {
            return Err(ToleranceError::UnknownKey(key.to_string()));
        }
        map.insert(key.to_string(), serde_json::json!(v));
        *self = serde_json::from_value(serde_json::Value::Object(map)).map_err(|_| bad())?;
        Ok(())
    }

    pub fn with_overrides<'a>(mut self, specs: impl IntoIterator<Item = &'a str>) -> Result<Self, ToleranceError> {
        for s in specs {
            self.apply_override(s)?;
        }
        Ok(self)
    }

    pub fn pairing_options(&self) -> PairingOptions {
        PairingOptions {
            pairing_tol: self.pairing,
            match_rel: self.matching,
        }
    }

    /// Window size for a dimension `n`: at least 2, at most `n`.
    pub fn window(&self, n: usize) -> usize {
        ((n as f64 * self.window_fraction).floor() as usize).clamp(2.min(n), n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn override_roundtrip() {
        let t = Tolerances::default().with_overrides(["pairing=1e-9", " im_tol = 2e-8"]).unwrap();
        assert_eq!(t.pairing, 1e-9);
        assert_eq!(t.im_tol, 2e-8);
        assert_eq!(t.loc_tol, Tolerances::default().loc_tol);
    }

    #[test]
    fn override_errors() {
        let mut t = Tolerances::default();
        assert!(matches!(t.apply_override("pairing"), Err(ToleranceError::Syntax(_))));
        assert!(matches!(t.apply_override("nope=1"), Err(ToleranceError::UnknownKey(_))));
        assert!(matches!(t.apply_override("pairing=-1"), Err(ToleranceError::BadValue { .. })));
        assert!(matches!(t.apply_override("pairing=abc"), Err(ToleranceError::BadValue { .. })));
    }

    #[test]
    fn window_sizes() {
        let t = Tolerances::default();
        assert_eq!(t.window(32), 8);
        assert_eq!(t.window(2), 2);
        assert_eq!(t.window(5), 2);
    }
}
