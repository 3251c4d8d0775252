use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{Command, ResolvedConfig, StateSpec};
use super::output::{Cell, Report, Section};
use super::ReportError;
use crate::eigen::{classify_reality, decompose_conditioned, eigenvalues, SpectralDecomposition};
use crate::fock::{Basis, OperatorMatrix};
use crate::metric::{
    closed_form_metric, eta_signature, expected_eta, hermitize, hermitize_with_log,
    involution_normalized_real_pairs, metric_from_biorthogonal, scale_matched_difference, transition_probability,
    verify_metric, MetricPair,
};
use crate::model::ModelSpec;
use crate::poschl_teller::solve_bound_states;
use crate::tolerances::Tolerances;

/// Dense grid metrics beyond this many points take minutes and exceed the
/// dynamic range of `e^{log Q}` anyway.
pub const MAX_DENSE_GRID: usize = 1200;

/// Errors at or below `NOISE_FLOOR · ε · max(1, |E|, max|λ|)` count as
/// converged, `max|λ|` taken over the whole truncated spectrum.
const NOISE_FLOOR: f64 = 64.0;

fn report(cfg: &ResolvedConfig) -> Report {
    Report {
        config: cfg.clone(),
        sections: Vec::new(),
        residuals: Vec::new(),
        warnings: cfg.warnings.clone(),
        version: env!("CARGO_PKG_VERSION"),
    }
}

/// Lowest `k` eigenvalues: the full dense spectrum for the oscillators, the
/// bound states for Pöschl-Teller.
fn low_spectrum(model: &ModelSpec, k: usize, tol: &Tolerances) -> Result<(Vec<Complex64>, Vec<Complex64>), ReportError> {
    match model {
        ModelSpec::Oscillator(m) => {
            let all = eigenvalues(&m.hamiltonian())?;
            Ok((all.iter().take(k).copied().collect(), all))
        }
        ModelSpec::PoeschlTeller(s) => {
            let bound = solve_bound_states(s, tol)?;
            let v: Vec<Complex64> = bound.eigenvalues().iter().take(k).copied().collect();
            Ok((v.clone(), v))
        }
    }
}

fn analytic(model: &ModelSpec, k: usize) -> Vec<f64> {
    match model {
        ModelSpec::Oscillator(m) => m.analytic_spectrum(k),
        // every bound state, capped at k
        ModelSpec::PoeschlTeller(s) => crate::poschl_teller::pt_bound_spectrum(s.gamma(), k.saturating_sub(1)),
    }
}

fn conditioned(h: &OperatorMatrix, tol: &Tolerances, rep: &mut Report) -> Result<SpectralDecomposition, ReportError> {
    let d = decompose_conditioned(h, &tol.pairing_options())?;
    if !d.is_complete() {
        rep.warnings.push(format!(
            "pairs from index {} up are quasi-defective (|<L|R>| < {:e}) and were dropped",
            d.len(),
            tol.pairing
        ));
    }
    Ok(d)
}

fn nan_c() -> Complex64 {
    Complex64::new(f64::NAN, f64::NAN)
}

pub fn cmd_spectrum(cfg: &ResolvedConfig) -> Result<Report, ReportError> {
    let tol = &cfg.tolerances;
    let model = cfg.model_spec()?;
    let mut rep = report(cfg);
    if cfg.k > model.basis().dim() {
        rep.warnings.push(format!("k = {} exceeds the dimension {}", cfg.k, model.basis().dim()));
    }
    let (low, all) = low_spectrum(&model, cfg.k, tol)?;
    let exact = analytic(&model, cfg.k);
    let im_tol = match &model {
        ModelSpec::PoeschlTeller(s) => crate::poschl_teller::bound_im_tol(s.deformation(), tol),
        ModelSpec::Oscillator(_) => tol.im_tol,
    };
    let rows = if cfg.is_oscillator() { low.len() } else { low.len().max(exact.len()) };
    if !cfg.is_oscillator() && low.len() != exact.len() {
        rep.warnings.push(format!("found {} bound states, expected {}", low.len(), exact.len()));
    }
    let mut sec = Section::new(
        "eigenvalues",
        &["index", "re", "im", "analytic", "abs_error", "rel_error", "real"],
    );
    let mut worst_rel: f64 = 0.0;
    for i in 0..rows {
        let z = low.get(i).copied().unwrap_or_else(nan_c);
        let e = exact.get(i).copied().unwrap_or(f64::NAN);
        let abs = (z - e).norm();
        let rel = abs / e.abs().max(f64::MIN_POSITIVE);
        worst_rel = worst_rel.max(rel);
        sec.push(vec![
            i.into(),
            z.re.into(),
            z.im.into(),
            e.into(),
            abs.into(),
            rel.into(),
            crate::eigen::is_real(z, im_tol).into(),
        ]);
    }
    let reported = classify_reality(&low, im_tol);
    let whole = classify_reality(&all, im_tol);
    let mut reality = Section::new("reality", &["scope", "count", "real", "complex", "unpaired"]);
    for (scope, n, r) in [("reported", low.len(), &reported), ("all", all.len(), &whole)] {
        reality.push(vec![
            scope.into(),
            n.into(),
            r.real_count.into(),
            r.complex_count().into(),
            r.unpaired.len().into(),
        ]);
    }
    if !reported.all_real() {
        rep.warnings.push(format!(
            "{} of the {} reported eigenvalues are not real at im_tol = {im_tol:e}",
            low.len() - reported.real_count,
            low.len()
        ));
    }
    rep.sections = vec![sec, reality];
    rep.residuals.push(("max_rel_error".into(), worst_rel));
    Ok(rep)
}

fn threshold_warnings(rep: &mut Report, checks: &[(&str, Option<f64>, f64)]) {
    for &(name, value, limit) in checks {
        if let Some(v) = value {
            if !(v <= limit) {
                rep.warnings.push(format!("{name} = {v:e} exceeds {limit:e}"));
            }
        }
    }
}

fn push_opt(rep: &mut Report, name: &str, v: Option<f64>) {
    if let Some(v) = v {
        rep.residuals.push((name.into(), v));
    }
}

fn metric_section(q: &OperatorMatrix, offset: usize, size: usize) -> Section {
    let mut sec = Section::new("metric", &["row", "col", "re", "im"]);
    for i in offset..offset + size {
        for j in offset..offset + size {
            let z = q.get(i, j);
            sec.push(vec![i.into(), j.into(), z.re.into(), z.im.into()]);
        }
    }
    sec
}

fn eta_section(d: &SpectralDecomposition, eta: &[i8], expected: Option<&[i8]>) -> Section {
    let mut sec = Section::new("eta", &["index", "re", "im", "eta", "expected"]);
    for (i, &s) in eta.iter().enumerate() {
        let z = d.eigenvalue(i);
        let e = expected.and_then(|x| x.get(i)).map_or(0, |&v| v as i64);
        sec.push(vec![i.into(), z.re.into(), z.im.into(), (s as i64).into(), e.into()]);
    }
    sec
}

fn verified_pair(model: &ModelSpec, h: &OperatorMatrix, window: usize, tol: &Tolerances) -> Result<MetricPair, ReportError> {
    let mut pair = closed_form_metric(model, tol)?;
    pair.window = window;
    Ok(verify_metric(h, pair))
}

pub fn cmd_metric(cfg: &ResolvedConfig) -> Result<Report, ReportError> {
    let tol = &cfg.tolerances;
    let model = cfg.model_spec()?;
    let mut rep = report(cfg);
    if let ModelSpec::PoeschlTeller(s) = &model {
        if !s.deformation().is_trivial() && s.grid().points() > MAX_DENSE_GRID {
            return Err(ReportError::validation(format!(
                "grid_m: a dense grid metric needs at most {MAX_DENSE_GRID} points, got {}",
                s.grid().points()
            )));
        }
    }
    let h = model.hamiltonian()?;
    let n = h.dim();
    let window = cfg.window_for(n);
    let pair = verified_pair(&model, &h, window, tol)?;
    push_opt(&mut rep, "residual_jh", pair.residual_jh);
    push_opt(&mut rep, "residual_qh", pair.residual_qh);
    push_opt(&mut rep, "residual_bender", pair.residual_bender);
    push_opt(&mut rep, "residual_jqj", pair.residual_jqj);
    threshold_warnings(
        &mut rep,
        &[
            ("residual_jh", pair.residual_jh, tol.residual_jh),
            ("residual_qh", pair.residual_qh, tol.residual_qh),
            ("residual_bender", pair.residual_bender, tol.residual_bender),
            ("residual_jqj", pair.residual_jqj, tol.residual_jqj),
        ],
    );
    if pair.j.is_none() {
        rep.warnings.push("no involution exists for this deformation; J residuals omitted".into());
    }

    match &model {
        ModelSpec::Oscillator(_) => {
            let j = pair.j.as_ref().expect("oscillators have an involution");
            let d = conditioned(&h, tol, &mut rep)?;
            let sub = involution_normalized_real_pairs(&d, j, tol)?;
            let k = window.min(sub.len());
            let eta = match eta_signature(&sub, j, k, tol.eta_offdiag) {
                Ok(e) => e,
                Err(e) => {
                    rep.warnings.push(e.to_string());
                    sub.eta().map(|e| e[..k].to_vec()).unwrap_or_default()
                }
            };
            let expected = expected_eta(&model, k);
            if let Some(x) = &expected {
                let bad: Vec<usize> = (0..k).filter(|&i| eta[i] != x[i]).collect();
                if !bad.is_empty() {
                    rep.warnings.push(format!("eta differs from the expected pattern at indices {bad:?}"));
                }
            }
            rep.residuals.push(("biorthogonality".into(), sub.biorthogonality_defect(k)));
            let bi = metric_from_biorthogonal(&sub, tol)?;
            let cmp = scale_matched_difference(&bi.q, &pair.q, window);
            rep.residuals.push(("metric_window_error".into(), cmp.relative_error));
            rep.residuals.push(("metric_scale".into(), cmp.scale));
            rep.residuals.push(("metric_asymmetry".into(), bi.asymmetry));
            threshold_warnings(&mut rep, &[("metric_window_error", Some(cmp.relative_error), 1e-6)]);
            let target = model.analytic_spectrum(window);
            match hermitize(&h, &pair.q, window) {
                Ok(t) => {
                    rep.residuals.push(("hermiticity_sqrt".into(), t.residual_window));
                    rep.residuals.push(("counterpart_diagonal_sqrt".into(), t.diagonal_deviation(&target)));
                }
                Err(e) => rep.warnings.push(format!("square-root hermitization failed: {e}")),
            }
            if let Some(lq) = &pair.log_q {
                let t = hermitize_with_log(&h, lq, window)?;
                rep.residuals.push(("hermiticity_log".into(), t.residual_window));
                let dev = t.diagonal_deviation(&target);
                rep.residuals.push(("counterpart_diagonal_log".into(), dev));
                threshold_warnings(
                    &mut rep,
                    &[
                        ("hermiticity_log", Some(t.residual_window), tol.hermiticity),
                        ("counterpart_diagonal_log", Some(dev), tol.counterpart_diagonal),
                    ],
                );
            }
            rep.sections.push(eta_section(&sub, &eta, expected.as_deref()));
            rep.sections.push(metric_section(&pair.q, 0, window.min(8)));
        }
        ModelSpec::PoeschlTeller(s) => {
            let bound = solve_bound_states(s, tol)?;
            if let Some(j) = &pair.j {
                match bound.normalize_with_involution(j, tol.involution_neutral) {
                    Ok(b) => {
                        let eta = b.eta().unwrap_or_default().to_vec();
                        rep.sections.push(eta_section(&b, &eta, None));
                    }
                    Err(e) => rep.warnings.push(e.to_string()),
                }
            }
            let size = window.min(8);
            rep.sections.push(metric_section(&pair.q, n / 2 - size / 2, size));
        }
    }
    Ok(rep)
}

/// Low eigenvalues and their errors along a ladder of truncations.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    /// Dimensions, or grid spacings for Pöschl-Teller.
    pub levels: Vec<f64>,
    pub analytic: Vec<f64>,
    /// `estimates[level][i]`, NaN where the level has fewer eigenvalues.
    pub estimates: Vec<Vec<Complex64>>,
    pub errors: Vec<Vec<f64>>,
    /// Least-squares slope of `log error` against `log level`, sign chosen
    /// so that a converging sequence has positive order.
    pub orders: Vec<f64>,
    /// `error(level) / error(next level)` per eigenvalue.
    pub ratios: Vec<Vec<f64>>,
    pub warnings: Vec<String>,
}

fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(_, y)| y.is_finite() && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

pub fn convergence_study(cfg: &ResolvedConfig) -> Result<ConvergenceReport, ReportError> {
    let tol = &cfg.tolerances;
    let models: Vec<ModelSpec> = cfg
        .ladder
        .iter()
        .map(|&l| {
            if cfg.is_oscillator() {
                cfg.oscillator_at(l as usize)
            } else {
                cfg.grid_at_spacing(l)
            }
        })
        .collect::<Result<_, _>>()?;
    let k = cfg.k;
    let exact = analytic(&models[0], k);
    let solved: Vec<(Vec<Complex64>, f64)> = models
        .par_iter()
        .map(|m| {
            low_spectrum(m, k, tol).map(|(low, all)| {
                let radius = all.iter().map(|z| z.norm()).fold(1.0, f64::max);
                (low, radius)
            })
        })
        .collect::<Result<_, _>>()?;
    let mut warnings = Vec::new();
    let rows = exact.len();
    let estimates: Vec<Vec<Complex64>> = solved
        .iter()
        .zip(&cfg.ladder)
        .map(|((v, _), level)| {
            if v.len() < rows {
                warnings.push(format!("level {level}: {} of {rows} eigenvalues found", v.len()));
            }
            (0..rows).map(|i| v.get(i).copied().unwrap_or_else(nan_c)).collect()
        })
        .collect();
    let errors: Vec<Vec<f64>> = estimates
        .iter()
        .map(|v| v.iter().zip(&exact).map(|(z, e)| (z - e).norm()).collect())
        .collect();
    let sign = if cfg.is_oscillator() { -1.0 } else { 1.0 };
    let mut orders = Vec::with_capacity(rows);
    let mut ratios = Vec::with_capacity(rows);
    for i in 0..rows {
        let floor: Vec<f64> = solved
            .iter()
            .map(|(_, radius)| NOISE_FLOOR * f64::EPSILON * exact[i].abs().max(*radius))
            .collect();
        let col: Vec<f64> = errors.iter().map(|e| e[i]).collect();
        let above: Vec<f64> = col.iter().zip(&floor).map(|(&e, &f)| if e > f { e } else { f64::NAN }).collect();
        orders.push(sign * fit_slope(&cfg.ladder, &above));
        ratios.push(col.windows(2).map(|w| w[0] / w[1]).collect());
        for (l, w) in col.windows(2).enumerate() {
            if w[1] > w[0] && w[1] > floor[l + 1] {
                warnings.push(format!(
                    "divergent truncation: eigenvalue {i} error grew from {:e} at level {} to {:e} at level {}",
                    w[0],
                    cfg.ladder[l],
                    w[1],
                    cfg.ladder[l + 1]
                ));
            }
        }
    }
    Ok(ConvergenceReport {
        levels: cfg.ladder.clone(),
        analytic: exact,
        estimates,
        errors,
        orders,
        ratios,
        warnings,
    })
}

pub fn cmd_converge(cfg: &ResolvedConfig) -> Result<Report, ReportError> {
    let study = convergence_study(cfg)?;
    let mut rep = report(cfg);
    rep.warnings.extend(study.warnings.iter().cloned());
    let mut levels = Section::new("levels", &["level", "index", "re", "im", "analytic", "abs_error", "rel_error"]);
    for (l, level) in study.levels.iter().enumerate() {
        for (i, z) in study.estimates[l].iter().enumerate() {
            let e = study.analytic[i];
            let abs = study.errors[l][i];
            levels.push(vec![
                (*level).into(),
                i.into(),
                z.re.into(),
                z.im.into(),
                e.into(),
                abs.into(),
                (abs / e.abs()).into(),
            ]);
        }
    }
    let mut orders = Section::new("orders", &["index", "analytic", "order"]);
    for (i, o) in study.orders.iter().enumerate() {
        orders.push(vec![i.into(), study.analytic[i].into(), (*o).into()]);
    }
    let mut ratios = Section::new("refinement", &["index", "from_level", "to_level", "ratio"]);
    for (i, r) in study.ratios.iter().enumerate() {
        for (l, v) in r.iter().enumerate() {
            ratios.push(vec![i.into(), study.levels[l].into(), study.levels[l + 1].into(), (*v).into()]);
        }
    }
    let last = study.errors.last().map_or(f64::NAN, |e| e.iter().copied().fold(0.0, f64::max));
    rep.residuals.push(("max_error_finest".into(), last));
    rep.sections = vec![levels, orders, ratios];
    Ok(rep)
}

fn build_state(spec: &StateSpec, sub: &SpectralDecomposition, dim: usize) -> Result<DVector<Complex64>, ReportError> {
    match spec {
        StateSpec::Eigenstate { index } => {
            if *index >= sub.len() {
                return Err(ReportError::validation(format!(
                    "eigenstate: index {index} out of range; {} real eigenpairs",
                    sub.len()
                )));
            }
            Ok(sub.right(*index).into_owned())
        }
        StateSpec::Coefficients { values } => {
            if values.len() > dim {
                return Err(ReportError::validation(format!(
                    "state_coeffs: {} coefficients for dimension {dim}",
                    values.len()
                )));
            }
            Ok(DVector::from_fn(dim, |i, _| values.get(i).copied().unwrap_or_default()))
        }
        StateSpec::Random { support, seed } => {
            if *support > dim {
                return Err(ReportError::validation(format!(
                    "random_state: support {support} exceeds dimension {dim}"
                )));
            }
            Ok(random_state(dim, *support, *seed))
        }
    }
}

/// Uniform complex coefficients in `[−1, 1]²` on the lowest `support` levels.
pub fn random_state(dim: usize, support: usize, seed: u64) -> DVector<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DVector::from_fn(dim, |i, _| {
        if i < support {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        } else {
            Complex64::default()
        }
    })
}

pub fn cmd_probability(cfg: &ResolvedConfig) -> Result<Report, ReportError> {
    let tol = &cfg.tolerances;
    let model = cfg.model_spec()?;
    let state_spec = cfg
        .state
        .as_ref()
        .ok_or_else(|| ReportError::validation("state: no state given"))?;
    let h = model.hamiltonian()?;
    let n = h.dim();
    let window = cfg.window_for(n);
    let pair = closed_form_metric(&model, tol)?;
    let j = pair.j.as_ref().ok_or_else(|| ReportError::validation("model: no involution defined"))?;
    let mut rep = report(cfg);
    let d = conditioned(&h, tol, &mut rep)?;
    let sub = involution_normalized_real_pairs(&d, j, tol)?;
    let state = build_state(state_spec, &sub, n)?;
    let p = transition_probability(&state, &sub, &pair.q, window, tol.support_leak)?;
    rep.warnings.extend(p.warnings.iter().cloned());
    let eta = sub.eta().unwrap_or_default();
    let mut sec = Section::new("probabilities", &["index", "re", "im", "eta", "probability"]);
    for (i, prob) in p.probabilities.iter().enumerate() {
        let z = p.eigenvalues[i];
        sec.push(vec![
            Cell::Text(i.to_string()),
            z.re.into(),
            z.im.into(),
            (eta.get(i).copied().unwrap_or(0) as i64).into(),
            (*prob).into(),
        ]);
    }
    sec.push(vec!["sum".into(), f64::NAN.into(), f64::NAN.into(), 0i64.into(), p.sum.into()]);
    let min = p.probabilities.iter().copied().fold(f64::INFINITY, f64::min);
    rep.residuals.push(("probability_sum_error".into(), (p.sum - 1.0).abs()));
    rep.residuals.push(("min_probability".into(), min));
    rep.residuals.push(("outside_weight".into(), p.outside_weight));
    rep.residuals.push(("metric_norm".into(), p.metric_norm));
    if matches!(model.basis(), Basis::Fock(_)) && p.outside_weight <= tol.support_leak {
        threshold_warnings(&mut rep, &[("probability_sum_error", Some((p.sum - 1.0).abs()), tol.probability_sum)]);
    }
    rep.sections.push(sec);
    Ok(rep)
}

pub fn run(command: Command, cfg: &ResolvedConfig) -> Result<Report, ReportError> {
    match command {
        Command::Spectrum => cmd_spectrum(cfg),
        Command::Metric => cmd_metric(cfg),
        Command::Converge => cmd_converge(cfg),
        Command::Probability => cmd_probability(cfg),
    }
}
