//! End-to-end tests of the camforge binary: subcommands, config handling,
//! output formats, determinism, and the exit-code contract.

use std::path::Path;
use std::process::{Command, Output};

use camforge::DesignReport;

fn camforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_camforge"))
        .args(args)
        .output()
        .expect("spawn camforge")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

const DUFFING: &[&str] = &[
    "design",
    "--force",
    "5000*X^3",
    "--stiffness",
    "100",
    "--preload",
    "0.1",
    "--travel-limit",
    "0.2",
];

#[test]
fn design_emits_six_branch_report() {
    let out = camforge(DUFFING);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let report = DesignReport::from_json(&stdout(&out)).unwrap();
    let labels: Vec<&str> = report.branches.iter().map(|b| b.label.as_str()).collect();
    assert_eq!(labels, ["Y11", "Y21", "Y12", "Y22", "Y14", "Y24"]);
    let notes: Vec<&str> = report.existence_notes.iter().map(|n| n.label.as_str()).collect();
    assert_eq!(notes, ["Y13", "Y23"]);
    // Aliases mark the zero-preload pair with its alternate labels.
    let y14 = report.branch("Y14").unwrap();
    assert_eq!(y14.alias.as_deref(), Some("Y13"));
    assert!(report.duration_ms.is_none(), "timing must be opt-in");
}

#[test]
fn design_missing_force_is_usage_error() {
    let out = camforge(&["design", "--stiffness", "100", "--preload", "0.1", "--travel-limit", "0.2"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--force"), "stderr: {}", stderr(&out));
}

#[test]
fn design_zero_preload_quadratic_has_eight_branches() {
    let out = camforge(&[
        "design", "--force", "X^2", "--stiffness", "100", "--preload", "0", "--travel-limit", "0.2",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let report = DesignReport::from_json(&stdout(&out)).unwrap();
    assert_eq!(report.branches.len(), 8);
}

#[test]
fn design_is_byte_identical_across_runs() {
    let a = camforge(DUFFING);
    let b = camforge(DUFFING);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    // A single-threaded run produces the same bytes.
    let c = Command::new(env!("CARGO_BIN_EXE_camforge"))
        .args(DUFFING)
        .env("CAMFORGE_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn design_config_file_matches_flags_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("camforge.toml");
    std::fs::write(
        &cfg,
        "[force]\nexpr = \"5000*X^3\"\n\n[design]\nstiffness = 100.0\npreload = 0.1\ntravel_limit = 0.2\n",
    )
    .unwrap();
    let from_cfg = camforge(&["design", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&from_cfg), 0, "stderr: {}", stderr(&from_cfg));
    let from_flags = camforge(DUFFING);
    assert_eq!(from_cfg.stdout, from_flags.stdout);

    // A flag overrides the same-named config key.
    let overridden = camforge(&["design", "--config", cfg.to_str().unwrap(), "--preload", "0"]);
    assert_eq!(code(&overridden), 0);
    let report = DesignReport::from_json(&stdout(&overridden)).unwrap();
    assert_eq!(report.problem.preload_abs, 0.0);

    // Unknown config keys are a usage error.
    std::fs::write(&cfg, "[design]\nstifness = 100.0\n").unwrap();
    let bad = camforge(&["design", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn design_writes_track_csvs_and_svgs() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let csvs = dir.path().join("csv");
    let svgs = dir.path().join("svg");
    let out = camforge(&[
        "design",
        "--force",
        "5000*X^3",
        "--stiffness",
        "100",
        "--preload",
        "0.1",
        "--travel-limit",
        "0.2",
        "--out",
        report.to_str().unwrap(),
        "--csv-dir",
        csvs.to_str().unwrap(),
        "--svg-dir",
        svgs.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    for label in ["Y11", "Y21", "Y12", "Y22", "Y14", "Y24"] {
        let csv = std::fs::read_to_string(csvs.join(format!("{label}.csv"))).unwrap();
        assert!(csv.starts_with("X,Y\n"), "missing header in {label}.csv");
        let svg = std::fs::read_to_string(svgs.join(format!("{label}.svg"))).unwrap();
        assert!(svg.starts_with("<svg"));
    }
    assert!(svgs.join("overlay.svg").exists());
    assert!(report.exists());
}

fn write_duffing_report(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("report.json");
    let out = camforge(&[
        "design",
        "--force",
        "5000*X^3",
        "--stiffness",
        "100",
        "--preload",
        "0.1",
        "--travel-limit",
        "0.2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    path
}

#[test]
fn simulate_from_report_emits_trajectory_csv() {
    let dir = tempfile::tempdir().unwrap();
    let report = write_duffing_report(dir.path());
    let out = camforge(&[
        "simulate",
        "--report",
        report.to_str().unwrap(),
        "--branch",
        "Y14",
        "--mass",
        "1",
        "--x0",
        "0.05",
        "--v0",
        "0",
        "--dt",
        "1e-4",
        "--t-end",
        "0.2",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let csv = stdout(&out);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,X,V,E"));
    assert_eq!(lines.count(), 2001);
    let summary = stderr(&out);
    assert!(summary.contains("termination=Completed"), "summary: {summary}");
    assert!(summary.contains("energy_drift="), "summary: {summary}");
}

#[test]
fn simulate_bad_initial_state_is_model_error() {
    let dir = tempfile::tempdir().unwrap();
    let report = write_duffing_report(dir.path());
    let out = camforge(&[
        "simulate",
        "--report",
        report.to_str().unwrap(),
        "--branch",
        "Y14",
        "--mass",
        "1",
        "--x0",
        "0.5",
        "--v0",
        "0",
        "--dt",
        "1e-4",
        "--t-end",
        "0.1",
    ]);
    assert_eq!(code(&out), 3, "stderr: {}", stderr(&out));
}

#[test]
fn verify_report_passes() {
    let dir = tempfile::tempdir().unwrap();
    let report = write_duffing_report(dir.path());
    let out = camforge(&["verify", "--report", report.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("label,residual_sup_rel,residual_rms_rel,verdict"), "got: {text}");
    assert!(text.trim_end().ends_with("PASS"), "got: {text}");
}

#[test]
fn verify_spline_track_pass_and_fail() {
    let dir = tempfile::tempdir().unwrap();
    // Sample the exact Y14 parabola Y = 5 X^2 on a fine grid.
    let mut good = String::from("X,Y\n");
    let mut bad = String::from("X,Y\n");
    for i in -60..=60i32 {
        let x = 0.003 * f64::from(i);
        good.push_str(&format!("{x},{}\n", 5.0 * x * x));
        bad.push_str(&format!("{x},{}\n", 5.5 * x * x));
    }
    let good_path = dir.path().join("good.csv");
    let bad_path = dir.path().join("bad.csv");
    std::fs::write(&good_path, good).unwrap();
    std::fs::write(&bad_path, bad).unwrap();

    let base = [
        "verify",
        "--force",
        "5000*X^3",
        "--stiffness",
        "-100",
        "--travel-limit",
        "0.2",
        "--track-csv",
    ];
    let mut args = base.to_vec();
    args.push(good_path.to_str().unwrap());
    let ok = camforge(&args);
    assert_eq!(code(&ok), 0, "stderr: {}", stderr(&ok));
    assert!(stdout(&ok).trim_end().ends_with("PASS"));

    let mut args = base.to_vec();
    args.push(bad_path.to_str().unwrap());
    let fail = camforge(&args);
    assert_eq!(code(&fail), 1, "stderr: {}", stderr(&fail));
    assert!(stdout(&fail).trim_end().ends_with("FAIL"));
}

#[test]
fn gsm_tabulates_qzs_configuration() {
    let out = camforge(&[
        "gsm", "--k1", "100", "--k2", "50", "--b", "0", "--l", "0.2", "--range", "0.1",
        "--samples", "3",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("qzs=true"), "stderr: {}", stderr(&out));
    let csv = stdout(&out);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "Y,F,K");
    assert_eq!(lines.len(), 4);
    for line in &lines[1..] {
        // Quasi-zero stiffness: the K column vanishes identically.
        assert_eq!(line.rsplit(',').next().unwrap(), "0");
    }
}

#[test]
fn gsm_stiffness_value_matches_oracle() {
    let out = camforge(&[
        "gsm", "--k1", "100", "--k2", "30", "--b", "0.05", "--l", "0.2", "--range", "0.1",
        "--samples", "3",
    ]);
    assert_eq!(code(&out), 0);
    let csv = stdout(&out);
    let last = csv.lines().last().unwrap();
    let fields: Vec<f64> = last.split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(fields[0], 0.1);
    assert!((fields[1] - 5.732050807568877).abs() < 1e-12);
    assert!((fields[2] - 63.09401076758504).abs() < 1e-12);
}

#[test]
fn gsm_rod_gap_geometry_is_usage_error() {
    let out = camforge(&["gsm", "--k1", "100", "--k2", "50", "--b", "0.3", "--l", "0.2"]);
    assert_eq!(code(&out), 2, "stderr: {}", stderr(&out));
}
