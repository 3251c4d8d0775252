use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ReportError;
use crate::fock::GridBasis;
use crate::model::ModelSpec;
use crate::oscillator::{ExtendedOscillatorSpec, OscillatorModel, SwansonSpec};
use crate::fock::FockBasis;
use crate::poschl_teller::{Deformation, PoeschlTellerSpec};
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spectrum,
    Metric,
    Converge,
    Probability,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Harmonic,
    ExtendedOsc,
    Swanson,
    Pt,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    #[default]
    Json,
}

/// Settings as given on the command line or in a config file; every field
/// is optional and [`RunConfig::resolve`] fills the defaults.
///
/// `ladder` lists basis dimensions for the oscillators and grid spacings for
/// Pöschl-Teller.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: Option<ModelKind>,
    pub beta: Option<f64>,
    pub theta: Option<f64>,
    pub gamma: Option<f64>,
    pub alpha: Option<f64>,
    pub dim: Option<usize>,
    pub grid_l: Option<f64>,
    pub grid_m: Option<usize>,
    pub k: Option<usize>,
    pub ladder: Option<Vec<f64>>,
    pub window: Option<usize>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub tol_override: Vec<String>,
    pub seed: Option<u64>,
    pub eigenstate: Option<usize>,
    pub state_coeffs: Option<Vec<Complex64>>,
    pub random_state: Option<usize>,
}

pub const DEFAULT_BETA: f64 = 2.0;
pub const DEFAULT_THETA: f64 = 0.3;
pub const DEFAULT_GAMMA: f64 = 3.0;
pub const DEFAULT_DIM: usize = 64;
pub const DEFAULT_GRID_L: f64 = 12.0;
/// `h = 2L/(M+1) = 0.01` at the default half width.
pub const DEFAULT_GRID_M: usize = 2399;
pub const DEFAULT_K: usize = 5;
const OSCILLATOR_LADDER: [f64; 4] = [16.0, 32.0, 64.0, 128.0];
const GRID_LADDER: [f64; 3] = [0.04, 0.02, 0.01];

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateSpec {
    Eigenstate { index: usize },
    Coefficients { values: Vec<Complex64> },
    /// Seeded complex Gaussian coefficients on the lowest `support` levels.
    Random { support: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridConfig {
    pub half_width: f64,
    pub points: usize,
    pub spacing: f64,
}

/// Fully materialized settings embedded in every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedConfig {
    pub command: Command,
    pub model: ModelKind,
    pub beta: Option<f64>,
    pub theta: Option<f64>,
    pub gamma: Option<f64>,
    pub deformation: Option<Deformation>,
    pub dim: Option<usize>,
    pub grid: Option<GridConfig>,
    pub k: usize,
    pub ladder: Vec<f64>,
    pub window: Option<usize>,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub tol_override: Vec<String>,
    pub tolerances: Tolerances,
    pub state: Option<StateSpec>,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl RunConfig {
    /// Read a JSON or TOML file, chosen by extension (TOML unless `.json`).
    pub fn from_file(path: &Path) -> Result<Self, ReportError> {
        let text = std::fs::read_to_string(path).map_err(|source| ReportError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let parsed = if is_json {
            serde_json::from_str(&text).map_err(|e| e.to_string())
        } else {
            toml::from_str(&text).map_err(|e| e.to_string())
        };
        parsed.map_err(|e| ReportError::validation(format!("config file {}: {e}", path.display())))
    }

    /// Fields set in `over` replace those of `self`; overrides accumulate.
    pub fn merge(self, over: RunConfig) -> RunConfig {
        let mut tol_override = self.tol_override;
        tol_override.extend(over.tol_override);
        RunConfig {
            model: over.model.or(self.model),
            beta: over.beta.or(self.beta),
            theta: over.theta.or(self.theta),
            gamma: over.gamma.or(self.gamma),
            alpha: over.alpha.or(self.alpha),
            dim: over.dim.or(self.dim),
            grid_l: over.grid_l.or(self.grid_l),
            grid_m: over.grid_m.or(self.grid_m),
            k: over.k.or(self.k),
            ladder: over.ladder.or(self.ladder),
            window: over.window.or(self.window),
            format: over.format.or(self.format),
            out: over.out.or(self.out),
            tol_override,
            seed: over.seed.or(self.seed),
            eigenstate: over.eigenstate.or(self.eigenstate),
            state_coeffs: over.state_coeffs.or(self.state_coeffs),
            random_state: over.random_state.or(self.random_state),
        }
    }

    pub fn resolve(&self, command: Command) -> Result<ResolvedConfig, ReportError> {
        let model = self
            .model
            .ok_or_else(|| ReportError::validation("model: one of harmonic, extended-osc, swanson, pt is required"))?;
        let mut warnings = Vec::new();
        let mut ignore = |name: &str, set: bool| {
            if set {
                warnings.push(format!("{name} is not used by model {}", model_name(model)));
            }
        };
        let oscillator = model != ModelKind::Pt;
        ignore("beta", self.beta.is_some() && model != ModelKind::ExtendedOsc);
        ignore("theta", self.theta.is_some() && !matches!(model, ModelKind::Swanson | ModelKind::Pt));
        ignore("gamma", self.gamma.is_some() && model != ModelKind::Pt);
        ignore("alpha", self.alpha.is_some() && model != ModelKind::Pt);
        ignore("dim", self.dim.is_some() && !oscillator);
        ignore("grid_l", self.grid_l.is_some() && oscillator);
        ignore("grid_m", self.grid_m.is_some() && oscillator);

        let deformation = if model == ModelKind::Pt {
            Some(match (self.alpha, self.theta) {
                (Some(_), Some(_)) => {
                    return Err(ReportError::validation(
                        "alpha/theta: a Pöschl-Teller run takes either a shift (alpha) or a scaling (theta), not both",
                    ))
                }
                (Some(alpha), None) => Deformation::Shift { alpha },
                (None, Some(theta)) => Deformation::Scale { theta },
                (None, None) => Deformation::None,
            })
        } else {
            None
        };
        let grid = if oscillator {
            None
        } else {
            let g = GridBasis::new(self.grid_l.unwrap_or(DEFAULT_GRID_L), self.grid_m.unwrap_or(DEFAULT_GRID_M))?;
            Some(GridConfig {
                half_width: g.half_width(),
                points: g.points(),
                spacing: g.spacing(),
            })
        };
        let k = self.k.unwrap_or(DEFAULT_K);
        if k == 0 {
            return Err(ReportError::validation("k: at least one eigenvalue must be requested"));
        }
        let ladder = match &self.ladder {
            Some(l) => l.clone(),
            None if oscillator => OSCILLATOR_LADDER.to_vec(),
            None => GRID_LADDER.to_vec(),
        };
        if command == Command::Converge {
            check_ladder(&ladder, oscillator)?;
        } else if self.ladder.is_some() {
            warnings.push(format!("ladder is only used by converge, not {}", command_name(command)));
        }
        let state = self.state(command, oscillator, &mut warnings)?;
        let tolerances = Tolerances::default().with_overrides(self.tol_override.iter().map(String::as_str))?;
        if self.window == Some(0) {
            return Err(ReportError::validation("window: must be at least 1"));
        }
        let resolved = ResolvedConfig {
            command,
            model,
            beta: (model == ModelKind::ExtendedOsc).then(|| self.beta.unwrap_or(DEFAULT_BETA)),
            theta: (model == ModelKind::Swanson).then(|| self.theta.unwrap_or(DEFAULT_THETA)),
            gamma: (model == ModelKind::Pt).then(|| self.gamma.unwrap_or(DEFAULT_GAMMA)),
            deformation,
            dim: oscillator.then(|| self.dim.unwrap_or(DEFAULT_DIM)),
            grid,
            k,
            ladder,
            window: self.window,
            format: self.format.unwrap_or_default(),
            out: self.out.clone(),
            seed: self.seed.unwrap_or(0),
            tol_override: self.tol_override.clone(),
            tolerances,
            state,
            warnings,
        };
        resolved.model_spec()?;
        Ok(resolved)
    }

    fn state(&self, command: Command, oscillator: bool, warnings: &mut Vec<String>) -> Result<Option<StateSpec>, ReportError> {
        let given = [self.eigenstate.is_some(), self.state_coeffs.is_some(), self.random_state.is_some()];
        let count = given.iter().filter(|&&b| b).count();
        if command != Command::Probability {
            if count > 0 {
                warnings.push(format!("state options are only used by probability, not {}", command_name(command)));
            }
            return Ok(None);
        }
        if !oscillator {
            return Err(ReportError::validation("model: probability needs an oscillator model with a Fock basis"));
        }
        if count != 1 {
            return Err(ReportError::validation(
                "state: give exactly one of eigenstate, state_coeffs, random_state",
            ));
        }
        Ok(Some(if let Some(index) = self.eigenstate {
            StateSpec::Eigenstate { index }
        } else if let Some(values) = &self.state_coeffs {
            if values.is_empty() {
                return Err(ReportError::validation("state_coeffs: empty coefficient list"));
            }
            StateSpec::Coefficients { values: values.clone() }
        } else {
            let support = self.random_state.unwrap_or(0);
            if support == 0 {
                return Err(ReportError::validation("random_state: support must be at least 1"));
            }
            StateSpec::Random {
                support,
                seed: self.seed.unwrap_or(0),
            }
        }))
    }
}

fn check_ladder(ladder: &[f64], oscillator: bool) -> Result<(), ReportError> {
    if ladder.len() < 3 {
        return Err(ReportError::validation(format!(
            "ladder: at least 3 levels required, got {}",
            ladder.len()
        )));
    }
    for w in ladder.windows(2) {
        let ok = if oscillator { w[1] > w[0] } else { w[1] < w[0] };
        if !ok {
            let order = if oscillator { "strictly increasing dimensions" } else { "strictly decreasing spacings" };
            return Err(ReportError::validation(format!("ladder: {order} required, got {ladder:?}")));
        }
    }
    for &v in ladder {
        let ok = if oscillator { v.fract() == 0.0 && v >= 2.0 } else { v.is_finite() && v > 0.0 };
        if !ok {
            return Err(ReportError::validation(format!("ladder: invalid level {v}")));
        }
    }
    Ok(())
}

pub(crate) fn model_name(m: ModelKind) -> &'static str {
    match m {
        ModelKind::Harmonic => "harmonic",
        ModelKind::ExtendedOsc => "extended-osc",
        ModelKind::Swanson => "swanson",
        ModelKind::Pt => "pt",
    }
}

pub(crate) fn command_name(c: Command) -> &'static str {
    match c {
        Command::Spectrum => "spectrum",
        Command::Metric => "metric",
        Command::Converge => "converge",
        Command::Probability => "probability",
    }
}

impl ResolvedConfig {
    pub fn model_spec(&self) -> Result<ModelSpec, ReportError> {
        match (self.dim, self.grid) {
            (Some(dim), _) => self.oscillator_at(dim),
            (None, Some(g)) => self.grid_model(GridBasis::new(g.half_width, g.points)?),
            (None, None) => unreachable!("resolution sets a basis"),
        }
    }

    pub fn oscillator_at(&self, dim: usize) -> Result<ModelSpec, ReportError> {
        let m: OscillatorModel = match self.model {
            ModelKind::Harmonic => OscillatorModel::Harmonic {
                basis: FockBasis::new(dim)?,
            },
            ModelKind::ExtendedOsc => ExtendedOscillatorSpec::new(self.beta.unwrap_or(DEFAULT_BETA), dim)?.into(),
            ModelKind::Swanson => SwansonSpec::new(self.theta.unwrap_or(DEFAULT_THETA), dim)?.into(),
            ModelKind::Pt => return Err(ReportError::validation("dim: Pöschl-Teller uses a grid, not a Fock basis")),
        };
        Ok(m.into())
    }

    pub fn grid_at_spacing(&self, spacing: f64) -> Result<ModelSpec, ReportError> {
        let l = self.grid.map_or(DEFAULT_GRID_L, |g| g.half_width);
        self.grid_model(GridBasis::with_spacing(l, spacing)?)
    }

    fn grid_model(&self, grid: GridBasis) -> Result<ModelSpec, ReportError> {
        let spec = PoeschlTellerSpec::new(
            self.gamma.unwrap_or(DEFAULT_GAMMA),
            self.deformation.unwrap_or(Deformation::None),
            grid,
        )?;
        Ok(spec.into())
    }

    pub fn is_oscillator(&self) -> bool {
        self.model != ModelKind::Pt
    }

    /// Verification window for dimension `n`.
    pub fn window_for(&self, n: usize) -> usize {
        self.window.unwrap_or_else(|| self.tolerances.window(n)).min(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(model: ModelKind) -> RunConfig {
        RunConfig {
            model: Some(model),
            ..Default::default()
        }
    }

    #[test]
    fn defaults_are_materialized() {
        let r = base(ModelKind::ExtendedOsc).resolve(Command::Spectrum).unwrap();
        assert_eq!(r.beta, Some(2.0));
        assert_eq!(r.dim, Some(64));
        assert_eq!(r.k, 5);
        assert!(r.grid.is_none());
        let r = base(ModelKind::Pt).resolve(Command::Spectrum).unwrap();
        let g = r.grid.unwrap();
        assert_eq!(g.points, 2399);
        assert!((g.spacing - 0.01).abs() < 1e-15);
        assert_eq!(r.deformation, Some(Deformation::None));
    }

    #[test]
    fn flags_win_over_file() {
        let file = RunConfig {
            beta: Some(3.0),
            dim: Some(16),
            tol_override: vec!["im_tol=1e-6".into()],
            ..base(ModelKind::ExtendedOsc)
        };
        let flags = RunConfig {
            beta: Some(2.5),
            tol_override: vec!["pairing=1e-9".into()],
            ..Default::default()
        };
        let r = file.merge(flags).resolve(Command::Spectrum).unwrap();
        assert_eq!(r.beta, Some(2.5));
        assert_eq!(r.dim, Some(16));
        assert_eq!(r.tolerances.im_tol, 1e-6);
        assert_eq!(r.tolerances.pairing, 1e-9);
    }

    #[test]
    fn validation_names_the_field() {
        let bad = |c: RunConfig, cmd| match c.resolve(cmd) {
            Err(ReportError::Validation(m)) => m,
            other => panic!("{other:?}"),
        };
        assert!(bad(RunConfig::default(), Command::Spectrum).contains("model"));
        let m = bad(RunConfig { beta: Some(-1.0), ..base(ModelKind::ExtendedOsc) }, Command::Spectrum);
        assert!(m.contains("beta"), "{m}");
        let m = bad(RunConfig { theta: Some(0.9), ..base(ModelKind::Swanson) }, Command::Spectrum);
        assert!(m.contains("theta"), "{m}");
        let m = bad(RunConfig { ladder: Some(vec![16.0, 8.0, 32.0]), ..base(ModelKind::Swanson) }, Command::Converge);
        assert!(m.contains("ladder"), "{m}");
        let m = bad(RunConfig { ladder: Some(vec![16.0, 32.0]), ..base(ModelKind::Swanson) }, Command::Converge);
        assert!(m.contains("ladder"), "{m}");
        let m = bad(
            RunConfig { alpha: Some(0.3), theta: Some(0.2), ..base(ModelKind::Pt) },
            Command::Spectrum,
        );
        assert!(m.contains("alpha"), "{m}");
        let m = bad(RunConfig { tol_override: vec!["nope=1".into()], ..base(ModelKind::Pt) }, Command::Spectrum);
        assert!(m.contains("nope"), "{m}");
        let m = bad(base(ModelKind::Swanson), Command::Probability);
        assert!(m.contains("state"), "{m}");
        let m = bad(RunConfig { eigenstate: Some(0), ..base(ModelKind::Pt) }, Command::Probability);
        assert!(m.contains("model"), "{m}");
    }

    #[test]
    fn grid_ladder_runs_towards_finer_spacing() {
        let r = base(ModelKind::Pt).resolve(Command::Converge).unwrap();
        assert_eq!(r.ladder, vec![0.04, 0.02, 0.01]);
        assert!(RunConfig { ladder: Some(vec![0.01, 0.02, 0.04]), ..base(ModelKind::Pt) }
            .resolve(Command::Converge)
            .is_err());
    }

    #[test]
    fn unused_flags_warn() {
        let r = RunConfig { gamma: Some(3.0), ..base(ModelKind::Swanson) }.resolve(Command::Spectrum).unwrap();
        assert_eq!(r.warnings.len(), 1);
        assert!(r.warnings[0].contains("gamma"));
    }

    #[test]
    fn file_formats() {
        let dir = tempfile::tempdir().unwrap();
        let t = dir.path().join("run.toml");
        std::fs::write(&t, "model = \"swanson\"\ntheta = 0.5\ndim = 32\ntol_override = [\"im_tol=1e-7\"]\n").unwrap();
        let c = RunConfig::from_file(&t).unwrap();
        assert_eq!(c.model, Some(ModelKind::Swanson));
        assert_eq!(c.theta, Some(0.5));
        let j = dir.path().join("run.json");
        std::fs::write(&j, r#"{"model": "pt", "alpha": 0.3, "ladder": [0.2, 0.1, 0.05]}"#).unwrap();
        let c = RunConfig::from_file(&j).unwrap();
        assert_eq!(c.alpha, Some(0.3));
        std::fs::write(&j, r#"{"model": "pt", "colour": 1}"#).unwrap();
        assert!(matches!(RunConfig::from_file(&j), Err(ReportError::Validation(_))));
        assert!(matches!(
            RunConfig::from_file(&dir.path().join("missing.toml")),
            Err(ReportError::Io { .. })
        ));
    }
}
