use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bathtub::io::{check_csv, sha256_hex, CsvKind, Manifest};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn bathtub(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bathtub"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn config(id: &str) -> String {
    configs().join(format!("{id}.toml")).display().to_string()
}

fn ok(output: &Output) {
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap()
}

/// Every manifest entry exists, hashes match and the CSV schema holds.
fn check_manifest(dir: &Path) -> Manifest {
    let text = std::fs::read_to_string(dir.join(Manifest::FILE_NAME)).unwrap();
    let manifest = Manifest::parse(&text).unwrap();
    assert!(!manifest.entries.is_empty());
    for e in &manifest.entries {
        let body = std::fs::read_to_string(dir.join(&e.path)).unwrap();
        assert_eq!(sha256_hex(body.as_bytes()), e.sha256, "{}", e.path);
        if let Some(kind) = CsvKind::of_path(&e.path) {
            assert_eq!(check_csv(&body, kind).unwrap(), e.rows, "{}", e.path);
        }
    }
    manifest
}

const COARSE: [&str; 4] = ["--dt", "1e-3", "--set", "run.richardson=false"];

#[test]
fn example_writes_a_consistent_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["example", "5.2a"];
    args.extend(COARSE);
    ok(&bathtub(&args, dir.path()));
    let manifest = check_manifest(dir.path());
    let names: Vec<&str> = manifest.entries.iter().map(|e| e.path.as_str()).collect();
    for name in [
        "trace.csv",
        "reconstruction.csv",
        "reconstruction_exact.csv",
        "report.toml",
    ] {
        assert!(names.contains(&name), "{names:?}");
    }
    let report = std::fs::read_to_string(dir.path().join("report.toml")).unwrap();
    assert!(report.contains("rng = "), "{report}");
}

#[test]
fn chained_inflow_commands_match_the_example() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = config("5.2a");
    let mut example = vec!["example", "5.2a", "--config", &cfg];
    example.extend(COARSE);
    ok(&bathtub(&example, a.path()));
    for cmd in ["forward", "invert-inflow"] {
        let mut args = vec![cmd, "--config", &cfg];
        args.extend(COARSE);
        ok(&bathtub(&args, b.path()));
    }
    assert_eq!(read(a.path(), "trace.csv"), read(b.path(), "trace.csv"));
    assert_eq!(
        read(a.path(), "reconstruction.csv"),
        read(b.path(), "reconstruction.csv")
    );
    let manifest = check_manifest(b.path());
    assert_eq!(manifest.entries.len(), 3);
}

#[test]
fn chained_distribution_commands_match_the_example() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = config("5.4a");
    ok(&bathtub(&["example", "5.4a", "--dt", "1e-3"], a.path()));
    ok(&bathtub(
        &["forward", "--config", &cfg, "--dt", "1e-3"],
        b.path(),
    ));
    let trace = b.path().join("trace.csv").display().to_string();
    let args = [
        "invert-distribution",
        "--config",
        &cfg,
        "--dt",
        "1e-3",
        "--trace",
        &trace,
    ];
    ok(&bathtub(&args, b.path()));
    assert_eq!(
        read(a.path(), "recovery.csv"),
        read(b.path(), "recovery.csv")
    );
    check_manifest(b.path());
}

#[test]
fn reruns_are_bit_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        ok(&bathtub(&["example", "5.1a", "--dt", "1e-3"], dir.path()));
    }
    assert_eq!(
        read(a.path(), Manifest::FILE_NAME),
        read(b.path(), Manifest::FILE_NAME)
    );
}

#[test]
fn studies_write_checked_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("5.1a");
    ok(&bathtub(
        &["convergence", "--config", &cfg, "--dt", "1e-3"],
        dir.path(),
    ));
    let args = [
        "noise-scaling",
        "--config",
        &cfg,
        "--dt",
        "1e-3",
        "--sigmas",
        "1e-2,1e-3,1e-4,0",
    ];
    let out = bathtub(&args, dir.path());
    ok(&out);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let manifest = check_manifest(dir.path());
    let names: Vec<&str> = manifest.entries.iter().map(|e| e.path.as_str()).collect();
    assert!(names.contains(&"convergence.csv") && names.contains(&"noise_scaling.csv"));
}

#[test]
fn validate_reports_admissible_scenarios() {
    let dir = tempfile::tempdir().unwrap();
    let out = bathtub(&["validate", "--config", &config("5.2a")], dir.path());
    ok(&out);
}

#[test]
fn validate_rejects_vanishing_initial_inflow() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "validate",
        "--config",
        &config("5.1a"),
        "--set",
        "inflow.params.rate=0",
    ];
    let out = bathtub(&args, dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("assumption-violation"));
}

#[test]
fn exit_codes_follow_the_error_category() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| bathtub(args, dir.path()).status.code();
    assert_eq!(code(&["example", "9.9"]), Some(2));
    let missing = dir.path().join("missing.toml").display().to_string();
    assert_eq!(code(&["forward", "--config", &missing]), Some(1));
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "L = [\n").unwrap();
    assert_eq!(
        code(&["forward", "--config", bad.to_str().unwrap()]),
        Some(2)
    );
    let cfg = config("5.2a");
    assert_eq!(
        code(&["forward", "--config", &cfg, "--set", "inflow.params.rate=1"]),
        Some(2)
    );
    assert_eq!(code(&["forward"]), Some(2));
    assert_eq!(code(&["no-such-command"]), Some(2));
}
