use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gatecert_core::gates::zt_gate;
use gatecert_core::linalg::{r, Mat2};
use gatecert_core::{GateLabel, Povm, QuantumModel};
use serde_json::Value;
use tempfile::TempDir;

fn gatecert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gatecert"))
        .args(args)
        .env_remove("GATECERT_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_model(dir: &TempDir, name: &str, model: &QuantumModel) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, model.to_json()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn certify_target_model() {
    let dir = TempDir::new().unwrap();
    let model = write_model(&dir, "target.json", &QuantumModel::s_gate_target());
    let report_path = dir.path().join("report.json");
    let out = gatecert(&["certify", "--model", s(&model), "--out", s(&report_path)]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = stdout_json(&out);
    for key in ["favg_s", "favg_sinv", "state_fidelity"] {
        assert!((v[key].as_f64().unwrap() - 1.0).abs() < 1e-12, "{key}");
    }
    assert!(v["epsilon_fail"].as_f64().unwrap().abs() < 1e-12);
    let saved: Value = serde_json::from_str(&fs::read_to_string(report_path).unwrap()).unwrap();
    assert_eq!(saved, v);
}

#[test]
fn certify_malformed_json_is_input_error() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{ not json").unwrap();
    let out = gatecert(&["certify", "--model", s(&path)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let out = gatecert(&["certify", "--model", s(&dir.path().join("missing.json"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certify_reports_violations() {
    let dir = TempDir::new().unwrap();
    let half = Mat2::identity() * r(0.5);
    let bad = Povm::from_raw(half * r(1.4), half * r(1.4));
    let model = write_model(
        &dir,
        "bad.json",
        &QuantumModel::s_gate_target().with_povm(bad),
    );
    let out = gatecert(&["certify", "--model", s(&model)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("povm"));
}

#[test]
fn certify_degenerate_measurement_exits_3() {
    let dir = TempDir::new().unwrap();
    let half = Mat2::identity() * r(0.5);
    let model = QuantumModel::s_gate_target().with_povm(Povm::from_plus(half));
    let path = write_model(&dir, "flat.json", &model);
    let out = gatecert(&["certify", "--model", s(&path)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sweep_is_deterministic_and_thread_independent() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let out = gatecert(&[
        "sweep",
        "--samples",
        "100",
        "--seed",
        "9",
        "--threads",
        "1",
        "--out",
        s(&a),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = gatecert(&[
        "sweep",
        "--samples",
        "100",
        "--seed",
        "9",
        "--threads",
        "3",
        "--out",
        s(&b),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(
        fs::read(dir.path().join("a.summary.json")).unwrap(),
        fs::read(dir.path().join("b.summary.json")).unwrap()
    );
    assert_eq!(fs::read_to_string(&a).unwrap().lines().count(), 101);
}

#[test]
fn sweep_seed_from_environment() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    gatecert(&["sweep", "--samples", "20", "--seed", "77", "--out", s(&a)]);
    let out = Command::new(env!("CARGO_BIN_EXE_gatecert"))
        .args(["sweep", "--samples", "20", "--out", s(&b)])
        .env("GATECERT_SEED", "77")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn sweep_worst_slope_at_ten_thousand() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = gatecert(&[
        "sweep",
        "--samples",
        "10000",
        "--seed",
        "1",
        "--out",
        s(&path),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let slope = stdout_json(&out)["worst_slope"].as_f64().unwrap();
    assert!((2.0..=5.5).contains(&slope), "{slope}");
}

#[test]
fn sweep_other_noise_kinds() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("dep.csv");
    let out = gatecert(&[
        "sweep",
        "--samples",
        "20",
        "--noise",
        "depolarizing",
        "--p",
        "0.01",
        "--alpha-max",
        "0.2",
        "--out",
        s(&path),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["noise"]["kind"], "depolarizing");
    let out = gatecert(&[
        "sweep",
        "--samples",
        "20",
        "--noise",
        "amplitude-damping",
        "--gamma",
        "0.02",
        "--out",
        s(&path),
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn sweep_usage_and_io_errors() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("x.csv");
    assert_eq!(
        gatecert(&["sweep", "--samples", "0", "--out", s(&path)])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        gatecert(&[
            "sweep",
            "--samples",
            "5",
            "--alpha-min",
            "0.5",
            "--alpha-max",
            "0.1",
            "--out",
            s(&path)
        ])
        .status
        .code(),
        Some(1)
    );
    let unwritable = dir.path().join("no/such/dir/x.csv");
    let out = gatecert(&["sweep", "--samples", "5", "--out", s(&unwritable)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no/such/dir"));
}

#[test]
fn complexity_values() {
    let out = gatecert(&[
        "complexity",
        "--eps",
        "0.05",
        "--delta",
        "0.05",
        "--slope",
        "5",
    ]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "300");
    let out = gatecert(&["complexity", "--eps", "0.1", "--delta", "0.05", "--json"]);
    assert_eq!(stdout_json(&out)["repetitions"], 29);
    let out = gatecert(&["complexity", "--eps", "0", "--delta", "0.05"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn run_target_accepts() {
    let dir = TempDir::new().unwrap();
    let model = write_model(&dir, "target.json", &QuantumModel::universal_target());
    for spec in ["s-gate", "universal"] {
        let out = gatecert(&[
            "run",
            "--model",
            s(&model),
            "--spec",
            spec,
            "--n",
            "1000",
            "--seed",
            "4",
            "--json",
        ]);
        assert_eq!(out.status.code(), Some(0));
        let v = stdout_json(&out);
        assert_eq!(v["verdict"], "accept");
        assert_eq!(v["repetitions_executed"], 1000);
    }
    let out = gatecert(&["run", "--model", s(&model), "--n", "10"]);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("accept"));
}

#[test]
fn run_rejects_flipped_measurement() {
    let dir = TempDir::new().unwrap();
    let flipped = QuantumModel::s_gate_target()
        .with_povm(Povm::projective(&gatecert_core::gates::ket_minus()));
    let model = write_model(&dir, "flipped.json", &flipped);
    let out = gatecert(&["run", "--model", s(&model), "--n", "100", "--json"]);
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "reject");
    assert_eq!(v["repetitions_executed"], 1);
}

#[test]
fn universal_zt_fixture() {
    let dir = TempDir::new().unwrap();
    let zt = QuantumModel::universal_target()
        .with_unitary(GateLabel::T, &zt_gate())
        .unwrap();
    let path = write_model(&dir, "zt.json", &zt);
    let out = gatecert(&["universal", "--model", s(&path), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["t_branch"], "ZT");
    let out = gatecert(&["universal", "--model", s(&path)]);
    let table = String::from_utf8_lossy(&out.stdout);
    assert!(table.contains("verdict     pass"));
    assert!(table.contains("t branch    ZT"));
}

#[test]
fn universal_failure_names_sequence() {
    let dir = TempDir::new().unwrap();
    let bad = QuantumModel::universal_target()
        .with_unitary(
            GateLabel::T,
            &gatecert_core::gates::phase(std::f64::consts::PI / 8.0),
        )
        .unwrap();
    let path = write_model(&dir, "bad.json", &bad);
    let out = gatecert(&["universal", "--model", s(&path), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "fail");
    assert_eq!(v["failing_checks"], serde_json::json!(["sequence tts"]));
}

#[test]
fn help_version_and_bad_flags() {
    assert_eq!(gatecert(&["--help"]).status.code(), Some(0));
    assert_eq!(gatecert(&["--version"]).status.code(), Some(0));
    assert_eq!(gatecert(&["certify"]).status.code(), Some(1));
    assert_eq!(gatecert(&["frobnicate"]).status.code(), Some(1));
}
