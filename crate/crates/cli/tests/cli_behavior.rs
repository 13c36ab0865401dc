//! End-to-end behavior of the binary: exit codes, the validate/run parity
//! contract, bound-only output, the seed environment variable, and manifest
//! re-runs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_satbandit")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("satbandit_cli_{}_{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(binary()).args(args).output().unwrap()
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

const SMALL: &str = "problem = P1\nmeans = [1, 2, 3, 4]\nstds = [1, 1, 1, 1]\n\
                     horizon = 50\ntrials = 3\nseed = 5\n";

#[test]
fn unknown_subcommand_exits_2() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["run", "--bogus-flag", "x"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn infeasible_config_exits_3() {
    let dir = scratch("infeasible");
    let cfg = write_config(
        &dir,
        "bad.cfg",
        "problem = P2\nmeans = [1, 2]\nstds = [1, 1]\nmean_threshold = 9\nhorizon = 10\ntrials = 1\n",
    );
    let out = run(&["validate", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["run", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn config_error_exits_2_and_names_field() {
    let dir = scratch("badfield");
    let cfg = write_config(&dir, "bad.cfg", "problem = P2\nmeans = [1, 2]\nstds = [1, 1]\n");
    let out = run(&["run", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("mean_threshold"), "stderr: {stderr}");
}

#[test]
fn validate_accepts_what_run_accepts() {
    let dir = scratch("parity");
    let cfg = write_config(&dir, "ok.cfg", SMALL);
    let out = run(&["validate", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let out = run(&["run", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.join("ok_p1_curves.csv").exists());
    assert!(dir.join("ok_p1_arms.csv").exists());
    assert!(dir.join("manifest.txt").exists());
}

#[test]
fn rerunning_from_manifest_reproduces_curves_byte_for_byte() {
    let dir = scratch("manifest");
    let cfg = write_config(&dir, "base.cfg", SMALL);
    let out1 = dir.join("first");
    assert!(run(&["run", cfg.to_str().unwrap(), "--out", out1.to_str().unwrap()])
        .status
        .success());
    let manifest = out1.join("manifest.txt");
    let out2 = dir.join("second");
    assert!(run(&["run", manifest.to_str().unwrap(), "--out", out2.to_str().unwrap()])
        .status
        .success());
    let first = fs::read(out1.join("base_p1_curves.csv")).unwrap();
    let second = fs::read(out2.join("manifest_p1_curves.csv")).unwrap();
    assert_eq!(first, second, "manifest re-run diverged");
}

#[test]
fn bounds_subcommand_emits_curves_without_simulating() {
    let dir = scratch("bounds");
    let out = run(&["bounds", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2)); // missing config argument
    let cfg = write_config(&dir, "b.cfg", SMALL);
    let out = run(&["bounds", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.join("b_p1_bounds.csv")).unwrap();
    assert!(text.starts_with("t,bound_upper,bound_lower\n"));
    assert_eq!(text.lines().count(), 51);
    assert!(!dir.join("b_p1_curves.csv").exists());
}

#[test]
fn bounds_accepts_preset_names() {
    let dir = scratch("bounds_preset");
    let out = run(&["bounds", "fig1", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    for name in ["fig1_p1_bounds.csv", "fig1_p2_bounds.csv"] {
        let text = fs::read_to_string(dir.join(name)).unwrap();
        assert_eq!(text.lines().count(), 1001);
        // Logarithmic upper bounds strictly increase with the horizon.
        let value = |line: &str| -> f64 { line.split(',').nth(1).unwrap().parse().unwrap() };
        let lines: Vec<&str> = text.lines().collect();
        assert!(value(lines[1000]) > value(lines[500]));
    }
}

#[test]
fn seed_env_var_overrides_default_only() {
    let dir = scratch("seedenv");
    let cfg = write_config(&dir, "s.cfg", SMALL);
    // Environment variable wins over the config default...
    let out = Command::new(binary())
        .args(["run", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()])
        .env("SATBANDIT_SEED", "123")
        .output()
        .unwrap();
    assert!(out.status.success());
    let manifest = fs::read_to_string(dir.join("manifest.txt")).unwrap();
    assert!(manifest.contains("seed = 123"), "{manifest}");
    // ...but an explicit --seed flag wins over the environment.
    let out = Command::new(binary())
        .args([
            "run",
            cfg.to_str().unwrap(),
            "--seed",
            "7",
            "--out",
            dir.to_str().unwrap(),
        ])
        .env("SATBANDIT_SEED", "123")
        .output()
        .unwrap();
    assert!(out.status.success());
    let manifest = fs::read_to_string(dir.join("manifest.txt")).unwrap();
    assert!(manifest.contains("seed = 7"), "{manifest}");
}

#[test]
fn smallest_run_emits_header_plus_one_row_per_step() {
    let dir = scratch("tiny");
    let cfg = write_config(
        &dir,
        "tiny.cfg",
        "problem = P1\nmeans = [0, 1]\nstds = [1, 1]\nhorizon = 2\ntrials = 1\nseed = 3\n",
    );
    assert!(run(&["run", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()])
        .status
        .success());
    let text = fs::read_to_string(dir.join("tiny_p1_curves.csv")).unwrap();
    assert_eq!(text.lines().count(), 3); // header + 2 data rows
}

#[test]
fn bound_column_constant_for_sufficing_objective() {
    let dir = scratch("constbound");
    let cfg = write_config(
        &dir,
        "p3.cfg",
        "problem = P3\nmeans = [1, 2, 3, 4]\nstds = [1, 1, 1, 1]\ndelta = 0.05\n\
         horizon = 40\ntrials = 2\nseed = 1\n",
    );
    assert!(run(&["run", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()])
        .status
        .success());
    let text = fs::read_to_string(dir.join("p3_p1_curves.csv").with_file_name("p3_p3_curves.csv"))
        .unwrap();
    let bounds: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    assert!(bounds.iter().all(|b| *b == bounds[0]));
}
