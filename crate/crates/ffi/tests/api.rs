use std::ffi::{CStr, CString};
use std::ptr;

use nhqm_ffi::*;

fn last_error() -> String {
    let p = nhqm_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn model(f: impl FnOnce(*mut *mut NhqmModel) -> NhqmStatus) -> *mut NhqmModel {
    let mut m = ptr::null_mut();
    assert_eq!(f(&mut m), NhqmStatus::Ok);
    assert!(!m.is_null());
    m
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(nhqm_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn extended_oscillator_spectrum_and_analytic_values() {
    unsafe {
        let m = model(|o| nhqm_model_extended_oscillator(2.0, 64, o));
        let mut dim = 0;
        assert_eq!(nhqm_model_dim(m, &mut dim), NhqmStatus::Ok);
        assert_eq!(dim, 64);
        let (mut re, mut im, mut exact) = ([0.0; 5], [0.0; 5], [0.0; 5]);
        let mut n = 0;
        assert_eq!(nhqm_spectrum(m, 5, re.as_mut_ptr(), im.as_mut_ptr(), &mut n), NhqmStatus::Ok);
        assert_eq!(n, 5);
        assert_eq!(nhqm_analytic_spectrum(m, 5, exact.as_mut_ptr(), &mut n), NhqmStatus::Ok);
        // 1/β + β(n + 1/2) at β = 2
        for k in 0..5 {
            assert_eq!(exact[k], 0.5 + 2.0 * (k as f64 + 0.5));
            assert!((re[k] - exact[k]).abs() < 1e-8 * exact[k]);
            assert!(im[k].abs() < 1e-8);
        }
        nhqm_model_free(m);
    }
}

#[test]
fn poeschl_teller_bound_states() {
    unsafe {
        let m = model(|o| nhqm_model_poeschl_teller(3.0, NhqmDeformation::Shift, 0.3, 12.0, 1199, o));
        let mut re = [0.0; 8];
        let mut n = 0;
        assert_eq!(nhqm_spectrum(m, 8, re.as_mut_ptr(), ptr::null_mut(), &mut n), NhqmStatus::Ok);
        assert_eq!(n, 2);
        assert!((re[0] + 4.0).abs() < 1e-3);
        assert!((re[1] + 1.0).abs() < 1e-3);
        nhqm_model_free(m);
    }
}

#[test]
fn metric_residuals() {
    unsafe {
        let m = model(|o| nhqm_model_swanson(0.3, 32, o));
        let mut r = NhqmResiduals { jh: -1.0, qh: -1.0, bender: -1.0, jqj: -1.0 };
        assert_eq!(nhqm_metric_residuals(m, &mut r), NhqmStatus::Ok);
        assert!(r.jh < 1e-14 && r.bender < 1e-14);
        assert!(r.qh.is_finite() && r.jqj.is_finite());
        nhqm_model_free(m);

        // no involution exists for the scaled grid
        let m = model(|o| nhqm_model_poeschl_teller(3.0, NhqmDeformation::Scale, 0.2, 12.0, 119, o));
        assert_eq!(nhqm_metric_residuals(m, &mut r), NhqmStatus::Ok);
        assert!(r.jh.is_nan() && r.bender.is_nan());
        assert!(r.qh.is_finite());
        nhqm_model_free(m);
    }
}

#[test]
fn decomposition_handle() {
    unsafe {
        let m = model(|o| nhqm_model_extended_oscillator(2.0, 32, o));
        let mut d = ptr::null_mut();
        assert_eq!(nhqm_decompose(m, &mut d), NhqmStatus::Ok);
        let mut len = 0;
        assert_eq!(nhqm_decomposition_len(d, &mut len), NhqmStatus::Ok);
        assert_eq!(len, 32);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(nhqm_decomposition_eigenvalue(d, 0, &mut re, &mut im), NhqmStatus::Ok);
        assert!((re - 1.5).abs() < 1e-10);
        assert_eq!(nhqm_decomposition_eigenvalue(d, 32, &mut re, &mut im), NhqmStatus::InvalidArgument);
        assert!(last_error().contains("out of range"));
        let mut defect = 1.0;
        assert_eq!(nhqm_decomposition_biorthogonality(d, 16, &mut defect), NhqmStatus::Ok);
        assert!(defect < 1e-8);
        nhqm_decomposition_free(d);
        nhqm_model_free(m);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(nhqm_model_extended_oscillator(-1.0, 16, &mut m), NhqmStatus::InvalidArgument);
        assert!(m.is_null());
        assert!(last_error().contains("beta"));
        assert_eq!(nhqm_model_swanson(0.3, 1, &mut m), NhqmStatus::InvalidArgument);
        assert_eq!(nhqm_model_harmonic(8, ptr::null_mut()), NhqmStatus::NullPointer);
        assert_eq!(last_error(), "out is null");
        let mut dim = 0;
        assert_eq!(nhqm_model_dim(ptr::null(), &mut dim), NhqmStatus::NullPointer);
        assert_eq!(
            nhqm_model_poeschl_teller(3.0, NhqmDeformation::None, 0.0, 5.0, 100, &mut m),
            NhqmStatus::InvalidArgument
        );

        // β = 2 at N = 2 has a double eigenvalue
        let two = model(|o| nhqm_model_extended_oscillator(2.0, 2, o));
        let mut d = ptr::null_mut();
        assert_eq!(nhqm_decompose(two, &mut d), NhqmStatus::NumericalFailure);
        assert!(d.is_null());
        assert!(last_error().contains("quasi-defective"));
        nhqm_model_free(two);

        let ok = model(|o| nhqm_model_harmonic(4, o));
        assert!(nhqm_last_error().is_null());
        nhqm_model_free(ok);
        nhqm_model_free(ptr::null_mut());
        nhqm_decomposition_free(ptr::null_mut());
        nhqm_string_free(ptr::null_mut());
    }
}

#[test]
fn run_renders_reports() {
    unsafe {
        let cmd = CString::new("spectrum").unwrap();
        let cfg = CString::new(r#"{"model": "swanson", "theta": 0.3, "dim": 48, "k": 3}"#).unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(nhqm_run(cmd.as_ptr(), cfg.as_ptr(), &mut out), NhqmStatus::Ok);
        let text = CStr::from_ptr(out).to_str().unwrap().to_owned();
        nhqm_string_free(out);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["results"]["eigenvalues"].as_array().unwrap().len(), 3);
        assert_eq!(v["config"]["dim"].as_u64(), Some(48));

        let csv = CString::new(r#"{"model": "harmonic", "dim": 8, "k": 2, "format": "csv"}"#).unwrap();
        assert_eq!(nhqm_run(cmd.as_ptr(), csv.as_ptr(), &mut out), NhqmStatus::Ok);
        assert!(CStr::from_ptr(out).to_str().unwrap().starts_with("# nhqm"));
        nhqm_string_free(out);

        let bad = CString::new("plot").unwrap();
        assert_eq!(nhqm_run(bad.as_ptr(), cfg.as_ptr(), &mut out), NhqmStatus::InvalidArgument);
        let junk = CString::new(r#"{"model": "swanson", "colour": 1}"#).unwrap();
        assert_eq!(nhqm_run(cmd.as_ptr(), junk.as_ptr(), &mut out), NhqmStatus::InvalidArgument);
        assert!(last_error().contains("colour"));
        assert_eq!(nhqm_run(ptr::null(), cfg.as_ptr(), &mut out), NhqmStatus::NullPointer);
    }
}
