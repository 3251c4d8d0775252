use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nhqm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nhqm")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = nhqm(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn column(v: &Value, section: &str, field: &str) -> Vec<f64> {
    v["results"][section]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| row[field].as_f64().unwrap_or(f64::NAN))
        .collect()
}

fn assert_close(found: &[f64], exact: &[f64]) {
    assert_eq!(found.len(), exact.len());
    for (a, b) in found.iter().zip(exact) {
        assert!((a - b).abs() <= 1e-14 * b.abs().max(1.0), "{found:?} vs {exact:?}");
    }
}

fn residual(v: &Value, name: &str) -> f64 {
    v["residuals"][name].as_f64().unwrap()
}

/// Parses one `# section:` block of the CSV output into rows of strings.
fn csv_section(text: &str, name: &str) -> Vec<Vec<String>> {
    let marker = format!("# section: {name}");
    let mut lines = text.lines().skip_while(|l| *l != marker).skip(2);
    let mut rows = Vec::new();
    for l in lines.by_ref() {
        if l.starts_with('#') || l.is_empty() {
            break;
        }
        rows.push(l.split(',').map(str::to_string).collect());
    }
    rows
}

#[test]
fn spectrum_analytic_columns() {
    let v = json(&["spectrum", "--model", "swanson", "--theta", "0.5235987755982988", "--dim", "128", "--k", "5"]);
    assert_close(&column(&v, "eigenvalues", "analytic"), &[1.0, 3.0, 5.0, 7.0, 9.0]);
    assert!(residual(&v, "max_rel_error") <= 1e-8);

    let v = json(&["spectrum", "--model", "extended-osc", "--beta", "2", "--dim", "64", "--k", "5"]);
    assert_close(&column(&v, "eigenvalues", "analytic"), &[1.5, 3.5, 5.5, 7.5, 9.5]);

    let v = json(&["spectrum", "--model", "pt", "--gamma", "3"]);
    assert_close(&column(&v, "eigenvalues", "analytic"), &[-4.0, -1.0]);
    for (re, exact) in column(&v, "eigenvalues", "re").iter().zip([-4.0, -1.0]) {
        assert!((re - exact).abs() < 2e-3);
    }
}

#[test]
fn report_embeds_resolved_config() {
    let v = json(&["spectrum", "--model", "extended-osc"]);
    assert_eq!(v["config"]["beta"].as_f64(), Some(2.0));
    assert_eq!(v["config"]["dim"].as_u64(), Some(64));
    assert_eq!(v["config"]["tolerances"]["im_tol"].as_f64(), Some(1e-8));
    assert_eq!(v["version"].as_str(), Some(env!("CARGO_PKG_VERSION")));
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in ["config", "results", "residuals", "warnings", "version"] {
        assert!(keys.contains(&k), "{k} missing");
    }
}

#[test]
fn metric_examples() {
    let v = json(&["metric", "--model", "extended-osc", "--beta", "2", "--dim", "32", "--window", "8"]);
    assert!(residual(&v, "residual_jh") < 1e-14);
    assert!(residual(&v, "metric_window_error") < 1e-6);
    let eta = v["results"]["eta"].as_array().unwrap();
    assert!(eta.iter().all(|r| r["eta"] == r["expected"]));

    let v = json(&["metric", "--model", "swanson", "--theta", "0.3", "--dim", "32", "--window", "8"]);
    assert!(residual(&v, "residual_bender") < 1e-14);

    let v = json(&["metric", "--model", "pt", "--alpha", "0", "--grid-m", "399"]);
    for name in ["residual_jh", "residual_qh", "residual_bender", "residual_jqj"] {
        assert!(residual(&v, name) < 1e-14, "{name}");
    }
    for row in v["results"]["metric"].as_array().unwrap() {
        let expected = if row["row"] == row["col"] { 1.0 } else { 0.0 };
        assert_eq!(row["re"].as_f64(), Some(expected));
        assert_eq!(row["im"].as_f64(), Some(0.0));
    }
}

#[test]
fn converge_examples() {
    let v = json(&["converge", "--model", "extended-osc", "--beta", "2", "--ladder", "16,32,64,128"]);
    assert!(v["warnings"].as_array().unwrap().is_empty());

    let v = json(&["converge", "--model", "swanson", "--theta", "0.3", "--ladder", "16,32,64"]);
    assert!(!v["warnings"].as_array().unwrap().iter().any(|w| w.as_str().unwrap().contains("divergent")));

    let v = json(&["converge", "--model", "pt", "--gamma", "3", "--ladder", "0.04,0.02,0.01"]);
    let ratios = v["results"]["refinement"].as_array().unwrap();
    assert!(!ratios.is_empty());
    for r in ratios {
        let x = r["ratio"].as_f64().unwrap();
        assert!((3.5..=4.5).contains(&x), "{x}");
    }
}

#[test]
fn probability_examples() {
    let v = json(&["probability", "--model", "extended-osc", "--dim", "32", "--eigenstate", "0"]);
    let p = column(&v, "probabilities", "probability");
    assert!((p[0] - 1.0).abs() < 1e-12);
    assert!(p[1..p.len() - 1].iter().all(|x| x.abs() < 1e-12));

    let v = json(&["probability", "--model", "extended-osc", "--beta", "2", "--dim", "32", "--state-coeffs", "1,1"]);
    assert!(residual(&v, "probability_sum_error") <= 1e-8);
    assert!(v["warnings"].as_array().unwrap().is_empty());

    let mut coeffs = vec!["0"; 16];
    coeffs[15] = "1";
    let edge = coeffs.join(",");
    let v = json(&["probability", "--model", "extended-osc", "--dim", "16", "--state-coeffs", &edge]);
    assert!(!v["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn csv_and_json_agree() {
    let args = ["spectrum", "--model", "swanson", "--theta", "0.3", "--dim", "48", "--k", "6"];
    let v = json(&args);
    let out = nhqm(&[&args[..], &["--format", "csv"]].concat());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    let rows = csv_section(&text, "eigenvalues");
    let re = column(&v, "eigenvalues", "re");
    let im = column(&v, "eigenvalues", "im");
    assert_eq!(rows.len(), re.len());
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[1].parse::<f64>().unwrap().to_bits(), re[i].to_bits());
        assert_eq!(row[2].parse::<f64>().unwrap().to_bits(), im[i].to_bits());
    }
    let res = csv_section(&text, "residuals");
    assert_eq!(res[0][0], "max_rel_error");
    assert_eq!(res[0][1].parse::<f64>().unwrap(), residual(&v, "max_rel_error"));
}

#[test]
fn seeded_reruns_are_byte_identical() {
    let args = ["probability", "--model", "swanson", "--theta", "0.2", "--dim", "48", "--random-state", "6", "--seed", "7"];
    let a = nhqm(&args);
    let b = nhqm(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let mut other = args.to_vec();
    let last = other.len() - 1;
    other[last] = "8";
    assert_ne!(nhqm(&other).stdout, a.stdout);
}

#[test]
fn config_file_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "model = \"extended-osc\"\nbeta = 3.0\ndim = 24\nk = 3\n").unwrap();
    let out = dir.path().join("spectrum.json");
    let cfg_s = cfg.to_str().unwrap();
    let out_s = out.to_str().unwrap();
    let res = nhqm(&["spectrum", "--config", cfg_s, "--dim", "32", "--out", out_s]);
    assert!(res.status.success());
    assert!(res.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["config"]["beta"].as_f64(), Some(3.0));
    assert_eq!(v["config"]["dim"].as_u64(), Some(32));
    // 1/β + β(n + 1/2)
    let exact: Vec<f64> = (0..3).map(|n| 1.0 / 3.0 + 3.0 * (n as f64 + 0.5)).collect();
    assert_close(&column(&v, "eigenvalues", "analytic"), &exact);
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        vec!["spectrum", "--model", "foo"],
        vec!["spectrum"],
        vec!["spectrum", "--model", "extended-osc", "--beta", "-1"],
        vec!["spectrum", "--model", "swanson", "--theta", "0.8"],
        vec!["metric", "--model", "swanson", "--theta", "0.6", "--dim", "16"],
        vec!["spectrum", "--model", "harmonic", "--tol-override", "bogus=1"],
        vec!["converge", "--model", "extended-osc", "--ladder", "16,32"],
        vec!["converge", "--model", "extended-osc", "--ladder", "32,16,64"],
        vec!["probability", "--model", "extended-osc", "--dim", "16"],
        vec!["spectrum", "--model", "pt", "--alpha", "0.3", "--theta", "0.2"],
    ] {
        let out = nhqm(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = nhqm(&["spectrum", "--model", "extended-osc", "--beta", "-1"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("beta"));
    let out = nhqm(&["spectrum", "--config", "/nonexistent/run.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_3() {
    // a J-neutral eigenvector once the pairing tolerance admits it
    let out = nhqm(&[
        "probability", "--model", "swanson", "--theta", "0.3", "--dim", "128", "--eigenstate", "0",
        "--tol-override", "pairing=1e-9", "--tol-override", "im_tol=1e-6",
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("neutral"));
}

#[test]
fn no_output_file_on_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.json");
    let res = nhqm(&["spectrum", "--model", "extended-osc", "--beta", "-1", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
    assert!(!Path::new(&out).exists());
}
