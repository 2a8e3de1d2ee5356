use std::fs;
use std::path::Path;
use std::process::Command;

use nlsfarf::cli::cli_main;
use nlsfarf::io::{parse_row, read_snapshot, CSV_HEADER};

const BIN: &str = env!("CARGO_BIN_EXE_nlsfarf");

fn config(dir: &Path, t_end: f64) -> String {
    format!(
        "grid.dim = 2\ngrid.extent = 16\ngrid.points = 32\n\
         nonlinearity.kind = gp\n\
         initial.kind = random_bounded\ninitial.energy = 0.5\ninitial.seed = 4\n\
         solver.dt = 0.002\nsolver.t_end = {t_end}\nsolver.report_every = 25\n\
         output.directory = {}\noutput.snapshot_stride = 50\n",
        dir.display()
    )
}

fn nlsfarf(args: &[&str]) -> i32 {
    let mut argv = vec!["nlsfarf"];
    argv.extend_from_slice(args);
    cli_main(argv)
}

#[test]
fn run_writes_series_snapshots_and_verdict() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = tmp.path().join("run.cfg");
    fs::write(&cfg, config(&out, 0.2)).unwrap();
    assert_eq!(nlsfarf(&["run", cfg.to_str().unwrap()]), 0);

    let csv = fs::read_to_string(out.join("run.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let rows: Vec<_> = lines.map(|l| parse_row(l).unwrap()).collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows.last().unwrap().status, "completed");
    assert!(rows[..4].iter().all(|r| r.status == "running"));
    for step in [0, 50, 100] {
        assert!(out.join(format!("snap_{step:010}.snap")).exists(), "missing snapshot {step}");
    }
    let (_, t) = read_snapshot(&out.join("final.snap")).unwrap();
    assert!((t - 0.2).abs() < 1e-12);
    let verdict = fs::read_to_string(out.join("run.verdict")).unwrap();
    assert!(verdict.starts_with("status = completed"), "{verdict}");
}

#[test]
fn resume_matches_the_full_run_bit_for_bit() {
    let tmp = tempfile::tempdir().unwrap();
    let (full, half) = (tmp.path().join("full"), tmp.path().join("half"));
    let full_cfg = tmp.path().join("full.cfg");
    let half_cfg = tmp.path().join("half.cfg");
    fs::write(&full_cfg, config(&full, 0.3)).unwrap();
    fs::write(&half_cfg, config(&half, 0.3)).unwrap();
    assert_eq!(nlsfarf(&["run", full_cfg.to_str().unwrap()]), 0);
    let snap = full.join("snap_0000000050.snap");
    assert_eq!(nlsfarf(&["resume", snap.to_str().unwrap(), half_cfg.to_str().unwrap()]), 0);

    assert_eq!(fs::read(full.join("final.snap")).unwrap(), fs::read(half.join("final.snap")).unwrap());
    let full_csv = fs::read_to_string(full.join("run.csv")).unwrap();
    let half_csv = fs::read_to_string(half.join("run.csv")).unwrap();
    let full_rows: Vec<&str> = full_csv.lines().collect();
    let half_rows: Vec<&str> = half_csv.lines().collect();
    assert_eq!(half_rows[1..], full_rows[full_rows.len() - half_rows.len() + 1..]);
}

#[test]
fn analyze_prints_one_snapshot_row() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = tmp.path().join("run.cfg");
    fs::write(&cfg, config(&out, 0.02)).unwrap();
    assert_eq!(nlsfarf(&["run", cfg.to_str().unwrap()]), 0);
    let output = Command::new(BIN).args(["analyze", out.join("final.snap").to_str().unwrap()]).output().unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], CSV_HEADER);
    let row = parse_row(lines[1]).unwrap();
    assert_eq!(row.status, "snapshot");
    assert!((row.t - 0.02).abs() < 1e-12);
    assert!(row.report.e > 0.0);
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.cfg");
    fs::write(&bad, "grid.dim = 2\ngrid.extent = 16\ngrid.points = 32\nsolver.dtt = 1\n").unwrap();
    assert_eq!(nlsfarf(&["run", bad.to_str().unwrap()]), 2);
    assert_eq!(nlsfarf(&["frobnicate"]), 2);
    assert_eq!(nlsfarf(&[]), 2);
    assert_eq!(nlsfarf(&["scenario", "nope"]), 2);
    assert_eq!(nlsfarf(&["--help"]), 0);
    assert_eq!(nlsfarf(&["analyze", tmp.path().join("missing.snap").to_str().unwrap()]), 3);

    let junk = tmp.path().join("junk.snap");
    fs::write(&junk, b"NLSFARF1\x01\x00").unwrap();
    let output = Command::new(BIN).args(["analyze", junk.to_str().unwrap()]).output().unwrap();
    assert_eq!(output.status.code(), Some(3));
    let err = String::from_utf8(output.stderr).unwrap();
    assert!(err.contains("offset 8"), "{err}");
}

#[test]
fn usage_lists_config_keys() {
    let output = Command::new(BIN).arg("--help").output().unwrap();
    let text = String::from_utf8(output.stdout).unwrap();
    for key in ["grid.points", "solver.report_every", "output.csv_stride", "initial.amplitude"] {
        assert!(text.contains(key), "help lacks {key}");
    }
}

#[test]
fn resume_past_the_end_is_a_runtime_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = tmp.path().join("run.cfg");
    fs::write(&cfg, config(&out, 0.02)).unwrap();
    assert_eq!(nlsfarf(&["run", cfg.to_str().unwrap()]), 0);
    assert_eq!(nlsfarf(&["resume", out.join("final.snap").to_str().unwrap(), cfg.to_str().unwrap()]), 3);
}

#[test]
fn catalog_and_single_scenario() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(nlsfarf(&["catalog"]), 0);
    assert_eq!(nlsfarf(&["scenario", "catalog", "--out", tmp.path().to_str().unwrap()]), 0);
    let verdict = fs::read_to_string(tmp.path().join("catalog.verdict")).unwrap();
    assert!(verdict.contains("passed = true"));
    assert!(tmp.path().join("catalog.csv").exists());
}
