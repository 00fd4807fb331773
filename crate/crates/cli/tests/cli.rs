use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn smoothek(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smoothek"))
        .args(args)
        .env_remove("SMOOTHEK_X")
        .env_remove("SMOOTHEK_Y")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}); stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn check<'a>(v: &'a Value, name: &str) -> &'a Value {
    v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn count_enumerates_tiny_case() {
    let out = smoothek(&["count", "--x", "10", "--y", "2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let p = &v["results"]["points"][0];
    assert_eq!(p["psi_sieve"], 4);
    assert_eq!(p["psi_recurrence"], 4);
    assert_eq!(p["upsilon"], 2);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["passed"], true);
}

#[test]
fn ultra_ratio_near_one() {
    let v = json(&smoothek(&["count", "--x", "1e6", "--y", "1e3"]));
    let r = v["results"]["points"][0]["ratio"].as_f64().unwrap();
    assert!((r - 1.0).abs() <= 0.05, "ratio {r}");
}

#[test]
fn floats_carry_seventeen_digits() {
    let out = smoothek(&["saddle", "--x", "1e6", "--y", "1e3"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("\"u\":2.0000000000000000e0"), "{s}");
}

#[test]
fn ek_rerun_is_byte_identical() {
    let args = ["ek", "--x", "1e6", "--y", "1e3", "--seed", "5"];
    let a = smoothek(&args);
    let b = smoothek(&args);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn lemmas_pass_at_reference_point() {
    let out = smoothek(&["lemmas", "--x", "1e8", "--y", "1e4"]);
    let v = json(&out);
    for c in v["checks"].as_array().unwrap() {
        assert_ne!(c["status"], "fail", "{c}");
    }
    assert_eq!(code(&out), 0);
}

#[test]
fn shifted_alpha_fails_local_ratio() {
    let out = smoothek(&["lemmas", "--x", "1e8", "--y", "1e4", "--alpha-shift", "0.1"]);
    assert_eq!(code(&out), 1);
    assert_eq!(check(&json(&out), "local_ratio")["status"], "fail");
}

#[test]
fn boundary_row_marks_xi_not_applicable() {
    let out = smoothek(&["lemmas", "--x", "1e4", "--y", "1e4"]);
    let v = json(&out);
    assert_eq!(check(&v, "xi_asymptotic")["status"], "n/a");
    assert_eq!(code(&out), 0);
}

#[test]
fn model_only_clt_at_ten_thousand() {
    let out = smoothek(&[
        "ek",
        "--x",
        "1e4",
        "--y",
        "1e4",
        "--model-only",
        "--trunc-exponent",
        "1",
        "--mode",
        "approximate",
        "--alpha",
        "0.5",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let ks = v["results"]["points"][0]["model"]["ks"]["ks_distance"].as_f64().unwrap();
    assert!(ks <= 0.05, "KS {ks}");
    assert_eq!(check(&v, "model_clt")["status"], "pass");
}

#[test]
fn ks_trend_along_fixed_u() {
    let out = smoothek(&["ek", "--y-grid", "1e3,1e4", "--fixed-u", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(check(&json(&out), "ks_trend")["status"], "pass");
}

#[test]
fn saddle_flags_degenerate_rows() {
    let out = smoothek(&["saddle", "--x-grid", "1000,1e6", "--y", "1000"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let rows = v["results"]["points"].as_array().unwrap();
    assert_eq!(rows[0]["degenerate"], true);
    assert_eq!(rows[1]["degenerate"], false);
    assert_eq!(check(&v, "degenerate")["status"], "flag");
}

#[test]
fn sums_and_model_pass() {
    let out = smoothek(&["sums", "--x", "1e8", "--y", "1e4", "--t", "100"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let out = smoothek(&[
        "model", "--x", "1e6", "--y", "1e3", "--trunc-exponent", "1", "--samples", "100000", "--seed", "3",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["results"]["points"][0]["primes"], 168);
}

#[test]
fn configuration_errors_exit_two() {
    assert_eq!(code(&smoothek(&["count", "--x", "5", "--y", "10"])), 2);
    assert_eq!(code(&smoothek(&["count", "--y", "10"])), 2);
    assert_eq!(code(&smoothek(&["count", "--x", "100", "--y", "10", "--moments", "11"])), 2);
    assert_eq!(code(&smoothek(&["count", "--nonsense"])), 2);
    assert_eq!(code(&smoothek(&["model", "--x", "100", "--y", "10", "--alpha", "0.5"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, "x = 1000\ny = 10\nmodes = \"exact\"\n").unwrap();
    let out = smoothek(&["count", "--config", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("`modes`") && err.contains("run.toml:3"), "{err}");
}

#[test]
fn capacity_errors_exit_three() {
    let out = smoothek(&["count", "--x", "3e10", "--y", "100"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("hint:"));
}

#[test]
fn environment_overrides() {
    let out = Command::new(env!("CARGO_BIN_EXE_smoothek"))
        .args(["count", "--y", "2"])
        .env("SMOOTHEK_X", "10")
        .env("SMOOTHEK_FORMAT", "csv")
        .output()
        .unwrap();
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("x,y,u,psi_sieve"), "{s}");
    assert!(s.lines().nth(1).unwrap().starts_with("10,2,"));
}

#[test]
fn baseline_store_detects_drift() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["count", "--x", "1e5", "--y", "100", "--cache-dir", d];
    assert_eq!(code(&smoothek(&args)), 0);
    let out = smoothek(&args);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("reproduced"));

    let store = dir.path().join("baselines.jsonl");
    let text = std::fs::read_to_string(&store).unwrap();
    assert_eq!(text.lines().count(), 1);
    let rec: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(rec["command"], "count");
    assert!(rec["thresholds"]["local_ratio_k"].is_number());
    std::fs::write(&store, text.replace("\\\"upsilon\\\":", "\\\"upsilon\\\":1")).unwrap();
    let out = smoothek(&args);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("mismatch"));
    assert!(!dir.path().join("smoothek.lock").exists());
}

#[test]
fn out_dir_holds_cdf_grids_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = smoothek(&["ek", "--x", "1e5", "--y", "100", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(dir.path().join("cdf_100000_100_smooth_paper_omega.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("z,F_emp,Phi"));
    assert_eq!(lines.count(), 161);
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report, json(&out));
    assert!(Path::new(&dir.path().join("cdf_100000_100_model.csv")).exists());
}
