use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn qwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk")).args(args).output().expect("binary runs")
}

fn run_ok(args: &[&str], out: &Path) {
    let mut all = args.to_vec();
    all.extend(["--out", out.to_str().unwrap()]);
    let o = qwalk(&all);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn same_artifacts(a: &Path, b: &Path, command: &str) {
    for ext in ["csv", "json"] {
        let name = format!("{command}.{ext}");
        assert_eq!(fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap(), "{name} differs");
    }
}

#[test]
fn identical_config_gives_identical_bytes() {
    let dir = TempDir::new().unwrap();
    let args = ["phases", "--theta1", "0.3pi", "--theta2", "0.6pi", "--n", "40", "--seed", "11"];
    run_ok(&args, &dir.path().join("a"));
    run_ok(&args, &dir.path().join("b"));
    same_artifacts(&dir.path().join("a"), &dir.path().join("b"), "phases");
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = TempDir::new().unwrap();
    let base = ["phase-diagram", "--n", "12", "--grid", "6"];
    let one = dir.path().join("one");
    let three = dir.path().join("three");
    run_ok(&[&base[..], &["--threads", "1"]].concat(), &one);
    run_ok(&[&base[..], &["--threads", "3"]].concat(), &three);
    same_artifacts(&one, &three, "phase-diagram");
}

#[test]
fn config_echo_reproduces_the_run() {
    let dir = TempDir::new().unwrap();
    let first = dir.path().join("first");
    run_ok(&["walk", "--theta1", "0.4pi", "--theta2", "1.1", "--n", "16", "--spin", "down"], &first);
    let meta = first.join("meta.json");
    let second = dir.path().join("second");
    run_ok(&["walk", "--config", meta.to_str().unwrap()], &second);
    same_artifacts(&first, &second, "walk");
    // Derived parameters are echoed explicitly.
    let echo = &json(&meta)["config"]["params"];
    assert_eq!(echo["lattice"], 34);
    assert!(echo["kick"].is_f64());
}

#[test]
fn missing_theta1_is_a_validation_error() {
    let dir = TempDir::new().unwrap();
    let o = qwalk(&["winding", "--theta2", "0.75pi", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("theta1"));
    assert!(!dir.path().join("winding.csv").exists());
}

#[test]
fn flag_overrides_file_and_is_noted() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"command": "winding", "params": {"theta1": "0.5pi", "theta2": "0.75pi"}}"#).unwrap();
    let out = dir.path().join("out");
    run_ok(&["winding", "--config", cfg.to_str().unwrap(), "--theta1", "0.25pi"], &out);
    let meta = json(&out.join("meta.json"));
    assert_eq!(meta["config"]["params"]["theta1"].as_f64(), Some(std::f64::consts::FRAC_PI_4));
    assert_eq!(meta["overrides"][0]["key"], "theta1");
    assert_eq!(meta["overrides"][0]["file"], "0.5pi");
    assert_eq!(meta["overrides"][0]["flag"], "0.25pi");
}

#[test]
fn winding_values() {
    // The implemented conventions put (pi/4, 3pi/4) in the W = 0 phase and
    // (3pi/4, pi/4) in the W = 1 phase.
    let dir = TempDir::new().unwrap();
    for (t1, t2, w) in [("0.25pi", "0.75pi", 0), ("0.75pi", "0.25pi", 1)] {
        let out = dir.path().join(t1);
        run_ok(&["winding", "--theta1", t1, "--theta2", t2], &out);
        assert_eq!(json(&out.join("winding.json"))["winding"], w);
        let csv = fs::read_to_string(out.join("winding.csv")).unwrap();
        assert_eq!(csv.lines().next(), Some("k,n_x,n_y,n_z"));
        assert_eq!(csv.lines().count(), 1025);
    }
}

#[test]
fn revival_stays_within_bound() {
    let dir = TempDir::new().unwrap();
    run_ok(&["revival", "--theta", "0.5pi", "--m", "40"], dir.path());
    let r = json(&dir.path().join("revival.json"));
    assert!(r["deviation"].as_f64().unwrap() <= r["bound"].as_f64().unwrap() + 1e-8);
    assert_eq!(r["within_bound"], true);
    // Odd m picks two traversals.
    run_ok(&["revival", "--theta", "0.5pi", "--m", "21"], dir.path());
    assert_eq!(json(&dir.path().join("meta.json"))["config"]["params"]["traversals"], 2);
}

#[test]
fn phase_diagram_table_layout() {
    let dir = TempDir::new().unwrap();
    run_ok(&["phase-diagram", "--n", "30", "--grid", "4"], dir.path());
    let csv = fs::read_to_string(dir.path().join("phase-diagram.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("theta1,theta2,f_exact,f_model,winding,min_gap,errors"));
    assert_eq!(lines.count(), 16);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().to_str().unwrap();
    let code = |args: &[&str]| qwalk(&[args, &["--out", out]].concat()).status.code();
    assert_eq!(code(&["winding", "--theta1", "0.5pi", "--theta2", "0.5pi"]), Some(3));
    assert_eq!(code(&["winding", "--theta1", "quarter", "--theta2", "1"]), Some(2));
    assert_eq!(code(&["revival", "--theta", "1", "--m", "3", "--traversals", "1"]), Some(2));
    assert_eq!(code(&["band", "--config", "/nonexistent/cfg.json"]), Some(1));

    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"params": {"theta1": 1.0, "theta2": 2.0, "grid": 3}}"#).unwrap();
    let o = qwalk(&["band", "--config", cfg.to_str().unwrap(), "--out", out]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`grid`"));

    fs::write(&cfg, r#"{"command": "revival", "params": {}}"#).unwrap();
    assert_eq!(code(&["band", "--config", cfg.to_str().unwrap()]), Some(2));
}

#[test]
fn cqed_wigner_reports_fringes() {
    let dir = TempDir::new().unwrap();
    run_ok(
        &["cqed-wigner", "--theta1", "0.25pi", "--theta2", "0.75pi", "--n", "4", "--sites", "20", "--spacing", "0.1"],
        dir.path(),
    );
    let r = json(&dir.path().join("cqed-wigner.json"));
    assert!((r["integral"].as_f64().unwrap() - 1.0).abs() < 0.02);
    assert!(r["max_abs"].as_f64().unwrap() <= 2.0 / std::f64::consts::PI + 1e-6);
    assert!(r["fringe_phase"].is_f64(), "{r}");
    let csv = fs::read_to_string(dir.path().join("cqed-wigner.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("re,im,w"));
}
