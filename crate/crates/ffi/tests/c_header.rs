use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "nhqm.h"

int main(void) {
    NhqmModel *m = NULL;
    if (nhqm_model_swanson(0.5235987755982988, 96, &m) != NHQM_STATUS_OK) return 1;
    double re[5], im[5];
    size_t n = 0;
    if (nhqm_spectrum(m, 5, re, im, &n) != NHQM_STATUS_OK || n != 5) return 2;
    for (size_t k = 0; k < n; k++) {
        if (fabs(re[k] - (2.0 * k + 1.0)) > 1e-8) return 3;
    }
    NhqmResiduals r;
    if (nhqm_metric_residuals(m, &r) != NHQM_STATUS_OK || r.jh >= 1e-14) return 4;
    nhqm_model_free(m);
    if (nhqm_model_swanson(2.0, 16, &m) != NHQM_STATUS_INVALID_ARGUMENT) return 5;
    if (nhqm_last_error() == NULL) return 6;
    printf("%s ok\n", nhqm_version());
    return 0;
}
"#;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn target_dir() -> PathBuf {
    std::env::var_os("CARGO_TARGET_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| root().join("../../target"))
        .join(if cfg!(debug_assertions) { "debug" } else { "release" })
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(root().join("include/nhqm.h")).unwrap();
    let source = std::fs::read_to_string(root().join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    for status in ["NHQM_STATUS_OK = 0", "NHQM_STATUS_NULL_POINTER = 1", "NHQM_STATUS_PANIC = 4"] {
        assert!(header.contains(status));
    }
}

#[test]
fn c_program_links_and_runs() {
    let lib = target_dir().join("libnhqm_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(root().join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), format!("{} ok\n", env!("CARGO_PKG_VERSION")));
}
