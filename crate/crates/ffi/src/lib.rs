//! C ABI over `nhqm`.
//!
//! Every function returns an [`NhqmStatus`]; on failure the message is kept
//! per thread and read back with [`nhqm_last_error`]. Handles are opaque and
//! released with the matching `_free` function. Panics never cross the
//! boundary: they are caught and reported as [`NhqmStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nhqm::eigen::{decompose, eigenvalues, SpectralDecomposition};
use nhqm::fock::{FockBasis, GridBasis};
use nhqm::metric::{closed_form_metric, verify_metric};
use nhqm::model::ModelSpec;
use nhqm::oscillator::{ExtendedOscillatorSpec, OscillatorModel, SwansonSpec};
use nhqm::poschl_teller::{solve_bound_states, Deformation, PoeschlTellerSpec};
use nhqm::report::{self, Command, ReportError, RunConfig};
use nhqm::Tolerances;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NhqmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NumericalFailure = 3,
    Panic = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NhqmDeformation {
    None = 0,
    Shift = 1,
    Scale = 2,
}

/// Metric residuals; NaN where a residual is undefined for the model.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct NhqmResiduals {
    pub jh: f64,
    pub qh: f64,
    pub bender: f64,
    pub jqj: f64,
}

/// Opaque Hamiltonian family with its truncation.
pub struct NhqmModel {
    spec: ModelSpec,
}

/// Opaque biorthogonal eigensystem.
pub struct NhqmDecomposition {
    inner: SpectralDecomposition,
}

enum Failure {
    Null(&'static str),
    Invalid(String),
    Report(ReportError),
}

impl<E: Into<ReportError>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Report(e.into())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> NhqmStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NhqmStatus::Ok,
        Ok(Err(Failure::Null(name))) => {
            set_error(format!("{name} is null"));
            NhqmStatus::NullPointer
        }
        Ok(Err(Failure::Invalid(msg))) => {
            set_error(msg);
            NhqmStatus::InvalidArgument
        }
        Ok(Err(Failure::Report(e))) => {
            set_error(e.to_string());
            if e.exit_code() == report::EXIT_NUMERICAL {
                NhqmStatus::NumericalFailure
            } else {
                NhqmStatus::InvalidArgument
            }
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            NhqmStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(name))
}

unsafe fn writable<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(name))
}

unsafe fn c_str<'a>(p: *const c_char, name: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Invalid(format!("{name} is not valid UTF-8")))
}

fn boxed_model(out: *mut *mut NhqmModel, spec: ModelSpec) -> Result<(), Failure> {
    unsafe { *writable(out, "out")? = Box::into_raw(Box::new(NhqmModel { spec })) };
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn nhqm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL after a success.
///
/// The pointer stays valid until the next call into the library on the
/// same thread.
#[no_mangle]
pub extern "C" fn nhqm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nhqm_model_harmonic(dim: usize, out: *mut *mut NhqmModel) -> NhqmStatus {
    guard(|| {
        let basis = FockBasis::new(dim)?;
        boxed_model(out, OscillatorModel::Harmonic { basis }.into())
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nhqm_model_extended_oscillator(
    beta: f64,
    dim: usize,
    out: *mut *mut NhqmModel,
) -> NhqmStatus {
    guard(|| {
        let spec = ExtendedOscillatorSpec::new(beta, dim)?;
        boxed_model(out, OscillatorModel::from(spec).into())
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nhqm_model_swanson(theta: f64, dim: usize, out: *mut *mut NhqmModel) -> NhqmStatus {
    guard(|| {
        let spec = SwansonSpec::new(theta, dim)?;
        boxed_model(out, OscillatorModel::from(spec).into())
    })
}

/// Grid model on `(−half_width, half_width)` with `points` interior nodes;
/// `parameter` is α for a shift and θ for a scale and ignored otherwise.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nhqm_model_poeschl_teller(
    gamma: f64,
    deformation: NhqmDeformation,
    parameter: f64,
    half_width: f64,
    points: usize,
    out: *mut *mut NhqmModel,
) -> NhqmStatus {
    guard(|| {
        let d = match deformation {
            NhqmDeformation::None => Deformation::None,
            NhqmDeformation::Shift => Deformation::Shift { alpha: parameter },
            NhqmDeformation::Scale => Deformation::Scale { theta: parameter },
        };
        let grid = GridBasis::new(half_width, points)?;
        boxed_model(out, PoeschlTellerSpec::new(gamma, d, grid)?.into())
    })
}

/// # Safety
/// `model` must come from a constructor above and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nhqm_model_free(model: *mut NhqmModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` must be a live handle and `dim` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nhqm_model_dim(model: *const NhqmModel, dim: *mut usize) -> NhqmStatus {
    guard(|| {
        *writable(dim, "dim")? = deref(model, "model")?.spec.basis().dim();
        Ok(())
    })
}

fn write_spectrum(
    values: &[(f64, f64)],
    capacity: usize,
    re: *mut f64,
    im: *mut f64,
    written: *mut usize,
) -> Result<(), Failure> {
    let n = values.len().min(capacity);
    if n > 0 && re.is_null() {
        return Err(Failure::Null("re"));
    }
    for (i, (a, b)) in values.iter().take(n).enumerate() {
        unsafe {
            *re.add(i) = *a;
            if !im.is_null() {
                *im.add(i) = *b;
            }
        }
    }
    unsafe { *writable(written, "written")? = n };
    Ok(())
}

/// Lowest `capacity` eigenvalues, ascending by real part; for Pöschl-Teller
/// grids only the bound states. `im` may be NULL.
///
/// # Safety
/// `re` (and `im` if not NULL) must hold `capacity` doubles; `written` must
/// be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nhqm_spectrum(
    model: *const NhqmModel,
    capacity: usize,
    re: *mut f64,
    im: *mut f64,
    written: *mut usize,
) -> NhqmStatus {
    guard(|| {
        let spec = &deref(model, "model")?.spec;
        let values: Vec<(f64, f64)> = match spec {
            ModelSpec::Oscillator(m) => eigenvalues(&m.hamiltonian())?
                .iter()
                .take(capacity)
                .map(|z| (z.re, z.im))
                .collect(),
            ModelSpec::PoeschlTeller(s) => solve_bound_states(s, &Tolerances::default())?
                .eigenvalues()
                .iter()
                .map(|z| (z.re, z.im))
                .collect(),
        };
        write_spectrum(&values, capacity, re, im, written)
    })
}

/// Exact spectrum of the untruncated model, lowest `capacity` values.
///
/// # Safety
/// `values` must hold `capacity` doubles; `written` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nhqm_analytic_spectrum(
    model: *const NhqmModel,
    capacity: usize,
    values: *mut f64,
    written: *mut usize,
) -> NhqmStatus {
    guard(|| {
        let exact = deref(model, "model")?.spec.analytic_spectrum(capacity);
        let pairs: Vec<(f64, f64)> = exact.iter().map(|&e| (e, 0.0)).collect();
        write_spectrum(&pairs, capacity, values, ptr::null_mut(), written)
    })
}

/// Residuals of the closed-form metric against the model Hamiltonian.
///
/// # Safety
/// `model` must be a live handle and `residuals` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nhqm_metric_residuals(model: *const NhqmModel, residuals: *mut NhqmResiduals) -> NhqmStatus {
    guard(|| {
        let spec = &deref(model, "model")?.spec;
        let dst = writable(residuals, "residuals")?;
        let pair = closed_form_metric(spec, &Tolerances::default())?;
        let p = verify_metric(&spec.hamiltonian()?, pair);
        *dst = NhqmResiduals {
            jh: p.residual_jh.unwrap_or(f64::NAN),
            qh: p.residual_qh.unwrap_or(f64::NAN),
            bender: p.residual_bender.unwrap_or(f64::NAN),
            jqj: p.residual_jqj.unwrap_or(f64::NAN),
        };
        Ok(())
    })
}

/// Full biorthogonal eigensystem of the model Hamiltonian.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nhqm_decompose(model: *const NhqmModel, out: *mut *mut NhqmDecomposition) -> NhqmStatus {
    guard(|| {
        let spec = &deref(model, "model")?.spec;
        let dst = writable(out, "out")?;
        let inner = decompose(&spec.hamiltonian()?, &Tolerances::default().pairing_options())?;
        *dst = Box::into_raw(Box::new(NhqmDecomposition { inner }));
        Ok(())
    })
}

/// # Safety
/// `d` must come from [`nhqm_decompose`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nhqm_decomposition_free(d: *mut NhqmDecomposition) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// `d` must be a live handle and `len` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nhqm_decomposition_len(d: *const NhqmDecomposition, len: *mut usize) -> NhqmStatus {
    guard(|| {
        *writable(len, "len")? = deref(d, "decomposition")?.inner.len();
        Ok(())
    })
}

/// # Safety
/// `d` must be a live handle; `re` and `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nhqm_decomposition_eigenvalue(
    d: *const NhqmDecomposition,
    index: usize,
    re: *mut f64,
    im: *mut f64,
) -> NhqmStatus {
    guard(|| {
        let inner = &deref(d, "decomposition")?.inner;
        let (re, im) = (writable(re, "re")?, writable(im, "im")?);
        if index >= inner.len() {
            return Err(Failure::Invalid(format!("index {index} out of range for {} pairs", inner.len())));
        }
        let z = inner.eigenvalue(index);
        *re = z.re;
        *im = z.im;
        Ok(())
    })
}

/// `max |⟨L_i|R_j⟩ − δ_ij|` over the lowest `k` pairs.
///
/// # Safety
/// `d` must be a live handle and `defect` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nhqm_decomposition_biorthogonality(
    d: *const NhqmDecomposition,
    k: usize,
    defect: *mut f64,
) -> NhqmStatus {
    guard(|| {
        *writable(defect, "defect")? = deref(d, "decomposition")?.inner.biorthogonality_defect(k);
        Ok(())
    })
}

/// Runs a CLI subcommand (`spectrum`, `metric`, `converge`, `probability`)
/// on a JSON config with the same fields as the command line and returns
/// the rendered report. Free the result with [`nhqm_string_free`].
///
/// # Safety
/// `command` and `config_json` must be NUL-terminated; `report` must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nhqm_run(
    command: *const c_char,
    config_json: *const c_char,
    report: *mut *mut c_char,
) -> NhqmStatus {
    guard(|| {
        let name = c_str(command, "command")?;
        let json = c_str(config_json, "config_json")?;
        let dst = writable(report, "report")?;
        let cmd: Command = serde_json::from_value(serde_json::Value::String(name.into()))
            .map_err(|_| Failure::Invalid(format!("unknown command {name:?}")))?;
        let cfg: RunConfig =
            serde_json::from_str(json).map_err(|e| Failure::Invalid(format!("config: {e}")))?;
        let resolved = cfg.resolve(cmd)?;
        let text = report::run(cmd, &resolved)?.render();
        *dst = CString::new(text)
            .map_err(|_| Failure::Invalid("report contains NUL".into()))?
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from [`nhqm_run`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nhqm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
