//! End-to-end tests of the `fedaloha` binary.

use std::fs;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fedaloha"))
}

#[test]
fn simulate_writes_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.cfg");
    fs::write(&config, "K=20\nM=2\nT=5\npolicy=equal\nseed=7\nruns=2\n").unwrap();
    let out = dir.path().join("out.csv");
    let status = bin()
        .args(["simulate", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,error_mean,error_std,successes_mean,active_mean,psi_mean,collisions_mean"
    );
    assert_eq!(lines.count(), 5);
}

#[test]
fn simulate_to_stdout_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.cfg");
    fs::write(&config, "K=10\nM=1\nT=3\npolicy=adaptive\nseed=3\n").unwrap();
    let run = || {
        let out = bin().args(["simulate", "--config"]).arg(&config).output().unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn malformed_config_fails_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.cfg");
    fs::write(&config, "K=20\nbogus_key=1\n").unwrap();
    let out = bin().args(["simulate", "--config"]).arg(&config).output().unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("line 2"), "stderr was: {stderr}");
}

#[test]
fn missing_config_file_fails() {
    let out = bin().args(["simulate", "--config", "/nonexistent.cfg"]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn unknown_preset_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["preset", "--name", "fig9", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("fig9"));
}

#[test]
fn preset_fig1_emits_expected_files() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["preset", "--name", "fig1", "--out-dir"])
        .arg(dir.path())
        .args(["--runs", "1", "--seed", "2"])
        .status()
        .unwrap();
    assert!(status.success());
    let mut names: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["fig1_ccd.csv", "fig1_genie.csv"]);
}
