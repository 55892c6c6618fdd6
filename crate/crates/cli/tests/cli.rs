use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn kdvh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kdvh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn meta(dir: &Path, name: &str) -> serde_json::Value {
    let text = fs::read_to_string(dir.join(format!("{name}.meta.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn solve_writes_csv_and_meta() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = kdvh(&["solve", "--n", "128", "--dt", "0.05", "--t-final", "0.5", "--out", out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("solve.csv")).unwrap();
    assert_eq!(csv.lines().count(), 129);
    let m = meta(dir.path(), "solve");
    assert_eq!(m["provenance"]["n"], 128);
    assert_eq!(m["summary"]["stats"]["steps"], 10);
    assert!(!dir.path().join("solve_relaxation.csv").exists());
}

#[test]
fn relaxation_flag_adds_a_gamma_log() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let args = ["solve", "--n", "64", "--dt", "0.05", "--t-final", "0.3", "--relaxation", "on"];
    let o = kdvh(&[&args[..], &["--name", "r", "--out", out]].concat());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let log = fs::read_to_string(dir.path().join("r_relaxation.csv")).unwrap();
    assert!(log.lines().count() > 1);
    assert_eq!(meta(dir.path(), "r")["provenance"]["config"]["relaxation"], true);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "name = \"from_file\"\nt_final = 0.2\ndt = 0.1\n[grid]\nn = 64\n").unwrap();
    let out = dir.path().to_str().unwrap();
    let o = kdvh(&["solve", "-c", cfg.to_str().unwrap(), "--dt", "0.05", "--out", out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let m = meta(dir.path(), "from_file");
    assert_eq!(m["provenance"]["config"]["dt"], 0.05);
    assert_eq!(m["provenance"]["config"]["grid"]["n"], 64);
}

#[test]
fn operators_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = kdvh(&["operators", "check", "--n", "16", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("operators_check.csv")).unwrap();
    // header, eight upwind orders and the Fourier operator
    assert_eq!(csv.lines().count(), 10);
}

#[test]
fn phase_portrait_and_solitary_waves_write_their_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(code(&kdvh(&["phase-portrait", "--out", out])), 0);
    assert!(dir.path().join("phase_portrait.csv").exists());
    assert!(dir.path().join("phase_portrait_orbits.csv").exists());
    assert_eq!(code(&kdvh(&["solitary-wave", "--out", out])), 0);
    let m = meta(dir.path(), "solitary_wave");
    assert_eq!(m["summary"]["profiles"].as_array().unwrap().len(), 3);
}

#[test]
fn configuration_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(code(&kdvh(&["solve", "--method", "no-such-method", "--out", out])), 1);
    assert_eq!(code(&kdvh(&["solve", "--dt", "-1", "--out", out])), 1);
    assert_eq!(code(&kdvh(&["solve", "--no-such-flag"])), 1);
    assert_eq!(code(&kdvh(&["solve", "--relaxation", "maybe"])), 1);
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "unknown_key = 3\n").unwrap();
    assert_eq!(code(&kdvh(&["solve", "-c", cfg.to_str().unwrap(), "--out", out])), 1);
    assert_eq!(code(&kdvh(&["solve", "-c", "/nonexistent/run.toml"])), 1);
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn numerical_failures_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    // an explicit convection step far beyond its stability limit
    let o = kdvh(&["solve", "--n", "128", "--tau", "1e-2", "--dt", "50", "--t-final", "500", "--out", out]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("non-finite"));
    // no solitary wave exists when c²τ = 1
    let cfg = dir.path().join("wave.toml");
    fs::write(&cfg, "[wave]\nc = 1.0\n[sweep]\ntaus = [1.0]\n").unwrap();
    let o = kdvh(&["solitary-wave", "-c", cfg.to_str().unwrap(), "--out", out]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn help_and_method_listing_succeed() {
    assert_eq!(code(&kdvh(&["--help"])), 0);
    let o = kdvh(&["methods"]);
    assert_eq!(code(&o), 0);
    let list: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(list.as_array().unwrap().len(), 8);
}
