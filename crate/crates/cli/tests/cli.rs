//! End-to-end checks of the `sparselms` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sparselms"))
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "command {args:?} failed:\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sparselms_cli_{tag}"));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()))
}

#[test]
fn same_seed_invocations_are_byte_identical() {
    let dir_a = tmp_dir("det_a");
    let dir_b = tmp_dir("det_b");
    for dir in [&dir_a, &dir_b] {
        run_ok(&[
            "run",
            "--preset",
            "example3_sweep",
            "--seed",
            "7",
            "--runs",
            "30",
            "--iters",
            "200",
            "--set",
            "snapshot_iteration=150",
            "--out",
            dir.to_str().unwrap(),
            "--plot",
            "excess_mse",
        ]);
    }

    for file in [
        "example3_sweep.csv",
        "example3_sweep_analysis.csv",
        "example3_sweep.json",
        "example3_sweep_excess_mse.svg",
    ] {
        let a = read(&dir_a.join(file));
        let b = read(&dir_b.join(file));
        assert_eq!(a, b, "{file} differs between identical invocations");
        assert!(!a.is_empty());
    }
}

#[test]
fn show_config_reports_documented_parameters() {
    let out = run_ok(&["show-config", "--preset", "example1_s1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("n = 16"), "{text}");
    assert!(text.contains("snr_db = 10.0"), "{text}");
    assert!(text.contains("mu = 0.05"), "{text}");
    assert!(text.contains("rho = 0.0005"), "{text}"); // za
    assert!(text.contains("rho = 0.004"), "{text}"); // rza
    assert!(text.contains("eps = 25.0"), "{text}");
    assert!(text.contains("rho = 0.0002"), "{text}"); // rl1 / lp
    assert!(text.contains("p = 0.5"), "{text}");

    // Overrides are reflected in the resolved output.
    let out = run_ok(&["show-config", "--preset", "example2_dct", "--set", "snr_db=20"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("snr_db = 20.0"), "{text}");
    assert!(text.contains("rho = 0.0001"), "halved rl1 rho missing: {text}");
}

#[test]
fn unknown_override_key_is_a_usage_error() {
    let out = bin()
        .args([
            "run",
            "--preset",
            "example1_s1",
            "--set",
            "bogus_key=3",
            "--out",
            "/tmp",
        ])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("unknown override key"), "{err}");
    assert!(err.contains("rho_r"), "should list valid keys: {err}");
}

#[test]
fn unknown_preset_is_rejected_by_clap() {
    let out = bin()
        .args(["run", "--preset", "example9", "--out", "/tmp"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("example1_s1"), "should list valid presets: {err}");
}

#[test]
fn custom_toml_config_runs() {
    let dir = tmp_dir("custom");
    let config = r#"
name = "custom_minimal"
n = 8
sparsity_levels = [2]
tap_law = "plus_minus_one"
unit_power = false
channel_domain = "time"
iterations = 100
runs = 10
seed = 3
steady_window = 0.2
redraw_channel = true
metric = "mse"

[noise]
variance = 0.01

[[algorithms]]
label = "lms"
variant = "standard"
mu = 0.05

[[algorithms]]
label = "rl1"
variant = "rl1"
mu = 0.05
rho = 2e-4
eps = 0.05
"#;
    let config_path = dir.join("experiment.toml");
    std::fs::write(&config_path, config).unwrap();
    let out = run_ok(&[
        "run",
        "--config",
        config_path.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
        "--format",
        "both",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("custom_minimal"), "{text}");
    assert!(dir.join("custom_minimal.csv").exists());
    assert!(dir.join("custom_minimal.json").exists());

    let csv = String::from_utf8(read(&dir.join("custom_minimal.csv"))).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(header, "iteration,lms_mse,rl1_mse");
    assert_eq!(csv.lines().count(), 101); // header + one row per iteration
}

#[test]
fn missing_input_is_a_usage_error() {
    let out = bin().args(["run", "--out", "/tmp"]).output().unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("--preset") || err.contains("preset"), "{err}");
}

#[test]
fn format_csv_skips_json() {
    let dir = tmp_dir("csvonly");
    run_ok(&[
        "run",
        "--preset",
        "example1_s1",
        "--runs",
        "2",
        "--iters",
        "10",
        "--out",
        dir.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(dir.join("example1_s1.csv").exists());
    assert!(!dir.join("example1_s1.json").exists());
}
