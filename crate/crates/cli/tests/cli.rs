//! End-to-end tests of the `pinlab` binary: exit codes, determinism, cache
//! behavior, and output shapes.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn pinlab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pinlab"))
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("run.cfg");
    std::fs::write(&path, text).unwrap();
    path
}

fn run_ok(args: &[&str]) -> Output {
    let out = pinlab().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "expected success for {args:?}: stderr = {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn exit_code(args: &[&str]) -> (i32, String) {
    let out = pinlab().args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stderr).to_string(),
    )
}

const SMALL_GRID: &str = "\
[law]
alpha = 2.0
phi = constant:1.0
n_max = 128

[disorder]
kind = gaussian

[model]
kind = pinning

[grid]
couplings = 0.0,0.2
biases = 0.0,0.05
sizes = 64,128,256
replicas = 8
seed = 11
";

fn read_single_csv(dir: &Path, prefix: &str) -> (std::path::PathBuf, String) {
    let mut found = None;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        if name.starts_with(prefix) && name.ends_with(".csv") {
            found = Some(path);
        }
    }
    let path = found.expect("output csv exists");
    let text = std::fs::read_to_string(&path).unwrap();
    (path, text)
}

#[test]
fn free_energy_grid_cardinality_and_determinism() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), SMALL_GRID);
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");

    run_ok(&[
        "free-energy",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_a.to_str().unwrap(),
    ]);
    // Across a different thread count, in a fresh directory.
    run_ok(&[
        "free-energy",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_b.to_str().unwrap(),
        "--threads",
        "1",
    ]);

    let (_, csv_a) = read_single_csv(&out_a, "free-energy");
    let (_, csv_b) = read_single_csv(&out_b, "free-energy");
    assert_eq!(csv_a, csv_b, "outputs must be byte-identical across runs");

    // 2 couplings x 2 biases x 3 sizes = 12 records (plus header).
    assert_eq!(csv_a.lines().count(), 13);
    assert!(csv_a.ends_with('\n'));
    assert!(!csv_a.contains('\r'), "LF line endings only");

    // Zero-coupling rows are deterministic: stderr column is exactly 0.
    let zero_rows: Vec<&str> = csv_a
        .lines()
        .skip(1)
        .filter(|l| l.starts_with("pinning,0,"))
        .collect();
    assert_eq!(zero_rows.len(), 6);
    for row in zero_rows {
        let stderr_field = row.split(',').nth(7).unwrap();
        assert_eq!(stderr_field, "0");
    }
}

#[test]
fn cached_rerun_is_byte_identical_with_flag() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), SMALL_GRID);
    let out = dir.path().join("out");

    run_ok(&[
        "free-energy",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    let (csv_path, first) = read_single_csv(&out, "free-energy");

    let second_run = run_ok(&[
        "free-energy",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    let stdout = String::from_utf8_lossy(&second_run.stdout);
    assert!(stdout.contains("cache_hit = true"), "stdout: {stdout}");
    let second = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(first, second);

    // The manifest records the cache hit and the RNG algorithm.
    let manifest_path = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.to_string_lossy().contains("manifest"))
        .unwrap();
    let manifest = std::fs::read_to_string(manifest_path).unwrap();
    assert!(manifest.contains("\"cache_hit\": true"));
    assert!(manifest.contains("chacha8-ctr/v1"));
}

#[test]
fn config_errors_exit_one_with_field_message() {
    let dir = TempDir::new().unwrap();
    // Missing [grid] couplings.
    let cfg = write_config(
        dir.path(),
        "[law]\nalpha = 2.0\nn_max = 64\n[model]\nkind = pinning\n[grid]\nbiases = 0.0\nsizes = 64,128,256\n",
    );
    let (code, stderr) = exit_code(&[
        "free-energy",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(stderr.contains("couplings"), "stderr: {stderr}");

    // Unknown model kind names the field.
    let cfg2 = write_config(
        dir.path(),
        "[law]\nalpha = 2.0\nn_max = 64\n[model]\nkind = wetting\n[grid]\ncouplings = 0.1\nbiases = 0.0\nsizes = 64,128,256\n",
    );
    let (code, stderr) = exit_code(&[
        "free-energy",
        "--config",
        cfg2.to_str().unwrap(),
        "--out",
        dir.path().join("o2").to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(stderr.contains("model"), "stderr: {stderr}");

    // No partial outputs were written on config errors.
    let leftovers: Vec<_> = std::fs::read_dir(dir.path().join("o"))
        .map(|rd| rd.map(|e| e.unwrap().path()).collect())
        .unwrap_or_default();
    assert!(
        leftovers.iter().all(|p| !p.to_string_lossy().ends_with(".csv")),
        "partial outputs: {leftovers:?}"
    );
}

#[test]
fn annealed_command_reports_regimes() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "[law]\nalpha = 2.0\nphi = constant:1.0\nn_max = 512\n[model]\nkind = pinning\n[annealed]\nbiases = -0.5,0.0,0.1\n",
    );
    let out = dir.path().join("out");
    run_ok(&[
        "annealed",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    let (_, csv) = read_single_csv(&out, "annealed");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[1].contains("CriticalOrDelocalized"));
    assert!(lines[3].contains("Localized"));
}

#[test]
fn certificate_paths_and_infeasible_exit() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");

    // Explicit mu/C1, omitted t: the search must run and report feasible.
    let run = run_ok(&[
        "certificate",
        "--alpha",
        "2.0",
        "--epsilon",
        "0.1",
        "--mu",
        "1.37",
        "--c1",
        "1.5",
        "--out",
        out.to_str().unwrap(),
    ]);
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.contains("feasible true"), "stdout: {stdout}");

    // mu and C1 pulled from the law's renewal diagnostics.
    let cfg = write_config(
        dir.path(),
        "[law]\nalpha = 2.0\nphi = constant:1.0\nn_max = 512\n[certificate]\nalpha = 2.0\nepsilon = 0.2\nprobe = 1024\n",
    );
    let run = run_ok(&[
        "certificate",
        "--config",
        cfg.to_str().unwrap(),
        "--law",
        "--out",
        out.to_str().unwrap(),
    ]);
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.contains("feasible true"), "stdout: {stdout}");

    // Infeasible preconditions: exit 2, inequality named.
    let (code, stderr) = exit_code(&[
        "certificate",
        "--alpha",
        "1.4",
        "--epsilon",
        "0.9",
        "--mu",
        "1.37",
        "--c1",
        "2.0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("alpha - epsilon/2 > 1"), "stderr: {stderr}");
}

#[test]
fn critical_scan_small_end_to_end_with_cache() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "[law]\nalpha = 2.0\nphi = constant:1.0\nn_max = 128\n[disorder]\nkind = gaussian\n[model]\nkind = pinning\n[scan]\ncouplings = 0.4,0.3\nsizes = 128,256,512\nreplicas = 16\nmax_iter = 4\nseed = 3\n",
    );
    let out = dir.path().join("out");
    run_ok(&[
        "critical-scan",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    let (_, csv) = read_single_csv(&out, "critical-scan");
    assert!(csv.starts_with("coupling,h_lo,h_c,h_hi,ratio,predicted,trend_flag\n"));
    assert_eq!(csv.lines().count(), 3);

    // Plot data exists with the three columns.
    let dat = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().map(|e| e == "dat").unwrap_or(false))
        .unwrap();
    let plot = std::fs::read_to_string(dat).unwrap();
    assert!(plot.starts_with("# coupling ratio predicted\n"));

    // Cached rerun.
    let second = run_ok(&[
        "critical-scan",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(String::from_utf8_lossy(&second.stdout).contains("cache_hit = true"));

    // Empty coupling list is a usage error.
    let bad = write_config(
        dir.path(),
        "[law]\nalpha = 2.0\nn_max = 128\n[model]\nkind = pinning\n[scan]\ncouplings =\nsizes = 128,256,512\n",
    );
    let (code, _) = exit_code(&[
        "critical-scan",
        "--config",
        bad.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
}

#[test]
fn smoothing_check_runs_and_reports_verdicts() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "[law]\nalpha = 2.0\nphi = constant:1.0\nn_max = 128\n[disorder]\nkind = gaussian\n[model]\nkind = pinning\n[smoothing]\ncoupling = 0.3\nt_scaled = -0.1,0.1\nsizes = 128,256,512\nreplicas = 16\nmax_iter = 4\nseed = 5\n",
    );
    let out = dir.path().join("out");
    run_ok(&[
        "smoothing-check",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    let (_, csv) = read_single_csv(&out, "smoothing-check");
    assert!(csv.starts_with("t,f,err,bound,verdict\n"));
    assert_eq!(csv.lines().count(), 3);

    // Out-of-window grid is a config error.
    let bad = write_config(
        dir.path(),
        "[law]\nalpha = 2.0\nn_max = 128\n[disorder]\nkind = gaussian\n[model]\nkind = pinning\n[smoothing]\ncoupling = 0.3\nt_scaled = 0.5\nsizes = 128,256,512\n",
    );
    let (code, stderr) = exit_code(&[
        "smoothing-check",
        "--config",
        bad.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(stderr.contains("window"), "stderr: {stderr}");
}

#[test]
fn fractional_moment_smoke() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "[law]\nalpha = 2.0\nphi = constant:1.0\nn_max = 128\n[disorder]\nkind = gaussian\n[fm]\nbeta = 0.2\nh = 0.008\nzeta = 0.5\nk = 200\nreplicas = 16\nseed = 9\n",
    );
    let out = dir.path().join("out");
    let run = run_ok(&[
        "fractional-moment",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(String::from_utf8_lossy(&run.stdout).contains("estimate"));
    let json = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().map(|e| e == "json").unwrap_or(false) && !p.to_string_lossy().contains("manifest"))
        .unwrap();
    let text = std::fs::read_to_string(json).unwrap();
    assert!(text.contains("holder_bound"));
}

#[test]
fn verify_rejects_unknown_suite() {
    let dir = TempDir::new().unwrap();
    let (code, stderr) = exit_code(&[
        "verify",
        "weekly",
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(stderr.contains("unknown suite"));
}

#[test]
fn verify_fast_suite_passes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let run = run_ok(&["verify", "fast", "--out", out.to_str().unwrap()]);
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.contains("PASS c01"));
    assert!(stdout.contains("criteria passed"));
    assert!(out.join("verify-report.json").exists());
}
