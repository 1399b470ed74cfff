//! camforge CLI: design roller-track profiles for a target restoring force,
//! simulate and verify them, and tabulate the oblique-rod spring assembly.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage/configuration
//! error, 3 runtime model error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use camforge::force::read_two_column_csv;
use camforge::svg::Chart;
use camforge::{
    design_branches, energy_drift, fit_track, gsm_force, gsm_stiffness, restoring_force,
    simulate_track, BranchLabel, BranchSet, DesignProblem, DesignReport, ForceSpec, GsmParams,
    Interpolation, LinearGsm, Method, SimConfig, SimResult, Track,
};

const EXIT_VERIFY_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_MODEL: u8 = 3;

/// A diagnostic plus the process exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn model(message: impl Into<String>) -> Self {
        Self { code: EXIT_MODEL, message: message.into() }
    }
}

type CliResult<T> = Result<T, Failure>;

#[derive(Parser)]
#[command(name = "camforge", version, about = "Roller-track synthesis for cam-spring mechanisms")]
struct Cli {
    /// TOML configuration file; any key can be overridden by the same-named flag.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate every valid track branch for a target force.
    Design(DesignArgs),
    /// Integrate the equation of motion on a designed or fitted track.
    Simulate(SimulateArgs),
    /// Check a track's reconstructed force against a target.
    Verify(VerifyArgs),
    /// Tabulate the oblique-rod spring assembly force and stiffness laws.
    Gsm(GsmArgs),
}

#[derive(Args, Default)]
struct ForceArgs {
    /// Target force as an expression in X, e.g. "5000*X^3".
    #[arg(long, value_name = "EXPR")]
    force: Option<String>,
    /// Target force as a 2-column CSV table (X,F).
    #[arg(long, value_name = "PATH")]
    force_csv: Option<PathBuf>,
    /// Table interpolation: "cubic" or "linear".
    #[arg(long, value_name = "KIND")]
    interpolation: Option<String>,
}

#[derive(Args)]
struct DesignArgs {
    #[command(flatten)]
    force: ForceArgs,
    /// Spring stiffness K [N/m]; sign matters only with --exact-params.
    #[arg(long, value_name = "K", allow_hyphen_values = true)]
    stiffness: Option<f64>,
    /// Preload d [m]; sign matters only with --exact-params.
    #[arg(long, value_name = "D", allow_hyphen_values = true)]
    preload: Option<f64>,
    /// Travel limit L [m].
    #[arg(long, value_name = "L")]
    travel_limit: Option<f64>,
    /// Half-width of the X search window [m] (default 10 L).
    #[arg(long, value_name = "W")]
    window: Option<f64>,
    /// Absolute tolerance for domain boundaries [m].
    #[arg(long, value_name = "TOL")]
    boundary_tol: Option<f64>,
    /// Absolute quadrature tolerance [N m].
    #[arg(long, value_name = "TOL")]
    quad_tol: Option<f64>,
    /// Points per branch profile in the report and CSVs.
    #[arg(long, value_name = "N")]
    profile_samples: Option<usize>,
    /// Chebyshev points for the reconstruction residual.
    #[arg(long, value_name = "N")]
    residual_samples: Option<usize>,
    /// Restrict to the signed (K, d) given instead of all sign classes.
    #[arg(long)]
    exact_params: bool,
    /// Record wall-clock duration in the report (breaks byte-identity).
    #[arg(long)]
    timing: bool,
    /// Report output path (default: stdout).
    #[arg(long, short, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Directory for per-branch track CSVs.
    #[arg(long, value_name = "DIR")]
    csv_dir: Option<PathBuf>,
    /// Directory for per-branch SVG plots plus an overlay plot.
    #[arg(long, value_name = "DIR")]
    svg_dir: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Design report to take the track from (with --branch).
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Branch label inside the report (Y11..Y24).
    #[arg(long, value_name = "LABEL")]
    branch: Option<String>,
    /// Track profile as a 2-column CSV (X,Y), fitted with a cubic spline.
    #[arg(long, value_name = "PATH")]
    track_csv: Option<PathBuf>,
    /// Spring stiffness K [N/m] (track CSV route).
    #[arg(long, value_name = "K", allow_hyphen_values = true)]
    stiffness: Option<f64>,
    /// Travel limit L [m] (track CSV route).
    #[arg(long, value_name = "L")]
    travel_limit: Option<f64>,
    /// Moving mass M [kg].
    #[arg(long, value_name = "M")]
    mass: Option<f64>,
    /// Initial position [m].
    #[arg(long, value_name = "X0", allow_hyphen_values = true)]
    x0: Option<f64>,
    /// Initial velocity [m/s].
    #[arg(long, value_name = "V0", allow_hyphen_values = true)]
    v0: Option<f64>,
    /// Time step [s].
    #[arg(long, value_name = "DT")]
    dt: Option<f64>,
    /// End time [s].
    #[arg(long, value_name = "T")]
    t_end: Option<f64>,
    /// Integrator: "verlet" or "rk4".
    #[arg(long, value_name = "NAME")]
    method: Option<String>,
    /// Record every n-th step.
    #[arg(long, value_name = "N")]
    stride: Option<usize>,
    /// Trajectory CSV output path (default: stdout).
    #[arg(long, short, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Design report: verify every branch against its own force.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Track profile CSV (X,Y) to verify against --force/--force-csv.
    #[arg(long, value_name = "PATH")]
    track_csv: Option<PathBuf>,
    #[command(flatten)]
    force: ForceArgs,
    /// Spring stiffness K [N/m] (track CSV route).
    #[arg(long, value_name = "K", allow_hyphen_values = true)]
    stiffness: Option<f64>,
    /// Travel limit L [m] (track CSV route).
    #[arg(long, value_name = "L")]
    travel_limit: Option<f64>,
    /// Relative sup-residual threshold (default 1e-6 report, 1e-3 spline).
    #[arg(long, value_name = "REL")]
    threshold: Option<f64>,
    /// Number of residual samples.
    #[arg(long, value_name = "N")]
    residual_samples: Option<usize>,
}

#[derive(Args)]
struct GsmArgs {
    /// Vertical spring stiffness K1 [N/m].
    #[arg(long, value_name = "K1", allow_hyphen_values = true)]
    k1: Option<f64>,
    /// Oblique spring stiffness K2 [N/m].
    #[arg(long, value_name = "K2", allow_hyphen_values = true)]
    k2: Option<f64>,
    /// Oblique-rod horizontal half-gap B [m].
    #[arg(long, value_name = "B")]
    b: Option<f64>,
    /// Oblique rod length L [m].
    #[arg(long, value_name = "L")]
    l: Option<f64>,
    /// Tabulation half-range in Y [m] (default 0.75 L).
    #[arg(long, value_name = "Y")]
    range: Option<f64>,
    /// Number of tabulation points.
    #[arg(long, value_name = "N")]
    samples: Option<usize>,
    /// CSV output path (default: stdout).
    #[arg(long, short, value_name = "PATH")]
    out: Option<PathBuf>,
    /// SVG plot of the force and stiffness curves.
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// Configuration file

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Config {
    #[serde(default)]
    force: ForceConfig,
    #[serde(default)]
    gsm: GsmConfig,
    #[serde(default)]
    design: DesignConfig,
    #[serde(default)]
    simulate: SimulateConfig,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ForceConfig {
    expr: Option<String>,
    csv: Option<PathBuf>,
    interpolation: Option<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct GsmConfig {
    k1: Option<f64>,
    k2: Option<f64>,
    b: Option<f64>,
    l: Option<f64>,
    range: Option<f64>,
    samples: Option<usize>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct DesignConfig {
    stiffness: Option<f64>,
    preload: Option<f64>,
    travel_limit: Option<f64>,
    window: Option<f64>,
    boundary_tol: Option<f64>,
    quad_tol: Option<f64>,
    profile_samples: Option<usize>,
    residual_samples: Option<usize>,
    exact_params: Option<bool>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct SimulateConfig {
    mass: Option<f64>,
    x0: Option<f64>,
    v0: Option<f64>,
    dt: Option<f64>,
    t_end: Option<f64>,
    method: Option<String>,
    stride: Option<usize>,
}

fn load_config(path: Option<&Path>) -> CliResult<Config> {
    let Some(path) = path else { return Ok(Config::default()) };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| Failure::usage(format!("malformed config {}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// Shared helpers

fn model_err(e: camforge::Error) -> Failure {
    Failure::model(e.to_string())
}

fn require<T>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| Failure::usage(format!("missing required flag {flag} (no config value)")))
}

fn parse_interpolation(name: Option<&str>) -> CliResult<Interpolation> {
    match name.unwrap_or("cubic") {
        "cubic" => Ok(Interpolation::Cubic),
        "linear" => Ok(Interpolation::Linear),
        other => Err(Failure::usage(format!(
            "unknown --interpolation {other:?} (expected \"cubic\" or \"linear\")"
        ))),
    }
}

fn parse_method(name: Option<&str>) -> CliResult<Method> {
    let name = name.unwrap_or("verlet");
    Method::from_name(name).ok_or_else(|| {
        Failure::usage(format!("unknown --method {name:?} (expected \"verlet\" or \"rk4\")"))
    })
}

/// Resolves the target force from flags and the [force] config section.
fn resolve_force(args: &ForceArgs, cfg: &ForceConfig) -> CliResult<ForceSpec> {
    let interpolation =
        parse_interpolation(args.interpolation.as_deref().or(cfg.interpolation.as_deref()))?;
    if let Some(expr) = args.force.as_deref().or(cfg.expr.as_deref()) {
        return ForceSpec::parse(expr)
            .map_err(|e| Failure::usage(format!("invalid --force expression: {e}")));
    }
    if let Some(path) = args.force_csv.as_deref().or(cfg.csv.as_deref()) {
        return ForceSpec::from_csv(path, interpolation)
            .map_err(|e| Failure::usage(format!("cannot load --force-csv {}: {e}", path.display())));
    }
    Err(Failure::usage("missing required flag --force (or --force-csv / [force] config)"))
}

fn write_output(path: Option<&Path>, content: &str) -> CliResult<()> {
    match path {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, content: &str) -> CliResult<()> {
    std::fs::write(path, content)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn track_csv(points: &[(f64, f64)]) -> String {
    let mut out = String::from("X,Y\n");
    for &(x, y) in points {
        let _ = writeln!(out, "{x},{y}");
    }
    out
}

// ---------------------------------------------------------------------------
// design

fn build_problem(args: &DesignArgs, cfg: &Config) -> CliResult<DesignProblem> {
    let force = Arc::new(resolve_force(&args.force, &cfg.force)?);
    let stiffness = require(args.stiffness.or(cfg.design.stiffness), "--stiffness")?;
    let preload = require(args.preload.or(cfg.design.preload), "--preload")?;
    let travel_limit = require(args.travel_limit.or(cfg.design.travel_limit), "--travel-limit")?;
    let window = args
        .window
        .or(cfg.design.window)
        .unwrap_or(camforge::inverse::DEFAULT_WINDOW_FACTOR * travel_limit);
    let boundary_tol = args
        .boundary_tol
        .or(cfg.design.boundary_tol)
        .unwrap_or(camforge::inverse::DEFAULT_BOUNDARY_TOL);
    let quad_tol = args.quad_tol.or(cfg.design.quad_tol).unwrap_or(camforge::DEFAULT_QUAD_TOL);
    DesignProblem::with_options(force, stiffness, preload, travel_limit, window, boundary_tol, quad_tol)
        .map_err(model_err)
}

/// With --exact-params, keeps only the branches matching the signed
/// stiffness and preload that were given.
fn filter_exact(set: &mut BranchSet, stiffness: f64, preload: f64) {
    let keep = |label: BranchLabel| {
        let k_ok = label.stiffness_positive() == (stiffness > 0.0);
        let d_ok = if preload == 0.0 {
            label.zero_preload()
        } else {
            !label.zero_preload() && (label.sign() > 0.0) == (preload > 0.0)
        };
        k_ok && d_ok
    };
    set.branches.retain(|b| keep(b.label));
    set.existence_notes.retain(|n| keep(n.label));
}

fn branch_chart(report: &DesignReport, label: &str) -> Chart {
    let rec = report.branch(label).expect("label comes from the report");
    Chart::new(&format!("branch {label}"), "X [m]", "Y [m]")
        .series(label, rec.track.clone())
        .marker(rec.x_lo)
        .marker(rec.x_hi)
}

fn cmd_design(args: &DesignArgs, cfg: &Config) -> CliResult<u8> {
    let start = std::time::Instant::now();
    let problem = build_problem(args, cfg)?;
    let mut set = design_branches(&problem).map_err(model_err)?;
    if args.exact_params || cfg.design.exact_params.unwrap_or(false) {
        let stiffness = args.stiffness.or(cfg.design.stiffness).unwrap_or(0.0);
        let preload = args.preload.or(cfg.design.preload).unwrap_or(0.0);
        filter_exact(&mut set, stiffness, preload);
    }
    let profile_samples = args.profile_samples.or(cfg.design.profile_samples).unwrap_or(129);
    let residual_samples = args.residual_samples.or(cfg.design.residual_samples).unwrap_or(257);
    let mut report =
        DesignReport::new(&set, profile_samples, residual_samples).map_err(model_err)?;
    if args.timing {
        report.duration_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }

    if let Some(dir) = &args.csv_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure::usage(format!("cannot create {}: {e}", dir.display())))?;
        for rec in &report.branches {
            write_file(&dir.join(format!("{}.csv", rec.label)), &track_csv(&rec.track))?;
        }
    }
    if let Some(dir) = &args.svg_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure::usage(format!("cannot create {}: {e}", dir.display())))?;
        let mut overlay = Chart::new("all branches", "X [m]", "Y [m]");
        for rec in &report.branches {
            write_file(
                &dir.join(format!("{}.svg", rec.label)),
                &branch_chart(&report, &rec.label).render(),
            )?;
            overlay = overlay.series(&rec.label, rec.track.clone()).marker(rec.x_lo).marker(rec.x_hi);
        }
        write_file(&dir.join("overlay.svg"), &overlay.render())?;
    }
    write_output(args.out.as_deref(), &report.to_json())?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// simulate

/// Rebuilds a branch track from a design report by re-running the
/// enumeration on the echoed problem (sampled-table forces cannot be
/// reconstructed from a report; use --track-csv for those).
fn track_from_report(path: &Path, label: &str) -> CliResult<Track> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read report {}: {e}", path.display())))?;
    let report = DesignReport::from_json(&text)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let rec = report.branch(label).ok_or_else(|| {
        Failure::usage(format!("report {} has no branch {label}", path.display()))
    })?;
    if report.problem.force.starts_with('<') {
        return Err(Failure::usage(
            "report echoes a sampled-table force; rebuild the track with --track-csv instead",
        ));
    }
    let force = Arc::new(
        ForceSpec::parse(&report.problem.force)
            .map_err(|e| Failure::usage(format!("report force does not parse: {e}")))?,
    );
    let problem = DesignProblem::with_options(
        force,
        rec.stiffness,
        rec.preload,
        report.problem.travel_limit,
        report.problem.search_window,
        report.problem.boundary_tol,
        report.problem.quad_tol,
    )
    .map_err(model_err)?;
    let set = design_branches(&problem).map_err(model_err)?;
    let label = BranchLabel::from_name(label)
        .ok_or_else(|| Failure::usage(format!("unknown branch label {label}")))?;
    set.branch(label)
        .ok_or_else(|| Failure::model(format!("branch {label} no longer exists for this problem")))?
        .to_track()
        .map_err(model_err)
}

fn track_from_csv(path: &Path, stiffness: f64, travel_limit: f64) -> CliResult<Track> {
    let samples = read_two_column_csv(path)
        .map_err(|e| Failure::usage(format!("cannot load track CSV {}: {e}", path.display())))?;
    let gsm = LinearGsm::new(stiffness, travel_limit).map_err(model_err)?;
    fit_track(&samples, gsm).map_err(model_err)
}

fn resolve_track(
    report: Option<&Path>,
    branch: Option<&str>,
    track_csv: Option<&Path>,
    stiffness: Option<f64>,
    travel_limit: Option<f64>,
) -> CliResult<Track> {
    match (report, track_csv) {
        (Some(report), None) => {
            let label = require(branch, "--branch")?;
            track_from_report(report, label)
        }
        (None, Some(csv)) => {
            let k = require(stiffness, "--stiffness")?;
            let l = require(travel_limit, "--travel-limit")?;
            track_from_csv(csv, k, l)
        }
        (Some(_), Some(_)) => Err(Failure::usage("--report and --track-csv are mutually exclusive")),
        (None, None) => Err(Failure::usage("missing track source: --report or --track-csv")),
    }
}

fn trajectory_csv(result: &SimResult) -> String {
    let mut out = String::from("t,X,V,E\n");
    for s in &result.samples {
        let _ = writeln!(out, "{},{},{},{}", s.t, s.x, s.v, s.e);
    }
    out
}

fn cmd_simulate(args: &SimulateArgs, cfg: &Config) -> CliResult<u8> {
    let track = resolve_track(
        args.report.as_deref(),
        args.branch.as_deref(),
        args.track_csv.as_deref(),
        args.stiffness.or(cfg.design.stiffness),
        args.travel_limit.or(cfg.design.travel_limit),
    )?;
    let mass = require(args.mass.or(cfg.simulate.mass), "--mass")?;
    let dt = require(args.dt.or(cfg.simulate.dt), "--dt")?;
    let t_end = require(args.t_end.or(cfg.simulate.t_end), "--t-end")?;
    let x0 = require(args.x0.or(cfg.simulate.x0), "--x0")?;
    let v0 = args.v0.or(cfg.simulate.v0).unwrap_or(0.0);
    let method = parse_method(args.method.as_deref().or(cfg.simulate.method.as_deref()))?;
    let mut config = SimConfig::new(mass, dt, t_end).map_err(model_err)?.with_method(method);
    if let Some(stride) = args.stride.or(cfg.simulate.stride) {
        config = config.with_stride(stride).map_err(model_err)?;
    }
    let result = simulate_track(&track, &config, x0, v0).map_err(model_err)?;
    let drift = energy_drift(&result).map_err(model_err)?;
    write_output(args.out.as_deref(), &trajectory_csv(&result))?;
    eprintln!(
        "termination={:?} steps={} recorded={} energy_drift={drift:e}",
        result.termination,
        result.steps,
        result.samples.len(),
    );
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify

fn cmd_verify(args: &VerifyArgs, cfg: &Config) -> CliResult<u8> {
    let residual_samples = args.residual_samples.unwrap_or(257);
    let mut rows: Vec<(String, f64, f64)> = Vec::new(); // (label, sup_rel, rms_rel)
    let default_threshold;
    match (&args.report, &args.track_csv) {
        (Some(path), None) => {
            default_threshold = 1e-6;
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read report {}: {e}", path.display())))?;
            let report = DesignReport::from_json(&text)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            for rec in &report.branches {
                let track = track_from_report(path, &rec.label)?;
                let branch = match track.profile() {
                    camforge::Profile::Branch(b) => b.clone(),
                    camforge::Profile::Spline(_) => unreachable!("report tracks are branches"),
                };
                let r = branch.reconstruction_residual(residual_samples).map_err(model_err)?;
                rows.push((rec.label.clone(), r.sup_rel, r.rms_rel));
            }
        }
        (None, Some(csv)) => {
            default_threshold = 1e-3;
            let force = resolve_force(&args.force, &cfg.force)?;
            let k = require(args.stiffness.or(cfg.design.stiffness), "--stiffness")?;
            let l = require(args.travel_limit.or(cfg.design.travel_limit), "--travel-limit")?;
            let track = track_from_csv(csv, k, l)?;
            let r = spline_residual(&track, &force, residual_samples)?;
            rows.push(("spline".into(), r.0, r.1));
        }
        _ => return Err(Failure::usage("verify needs exactly one of --report or --track-csv")),
    }
    let threshold = args.threshold.unwrap_or(default_threshold);
    let mut pass = true;
    println!("label,residual_sup_rel,residual_rms_rel,verdict");
    for (label, sup, rms) in &rows {
        let ok = sup <= &threshold;
        pass &= ok;
        println!("{label},{sup:e},{rms:e},{}", if ok { "pass" } else { "fail" });
    }
    println!("{}", if pass { "PASS" } else { "FAIL" });
    Ok(if pass { 0 } else { EXIT_VERIFY_FAIL })
}

/// Sup/RMS residual of `-K Y Y'` against the target force for a fitted
/// spline track, Chebyshev-sampled over the track domain (intersected with
/// the force table range), relative to `1 + max |F|`.
fn spline_residual(track: &Track, force: &ForceSpec, n: usize) -> CliResult<(f64, f64)> {
    let (mut a, mut b) = track.domain();
    // The natural end condition (Y'' = 0) contaminates the outermost spline
    // segments, so they are excluded from the residual when enough knots
    // remain.
    if let camforge::Profile::Spline(s) = track.profile() {
        let (xs, _) = s.knots();
        if xs.len() >= 6 {
            a = a.max(xs[2]);
            b = b.min(xs[xs.len() - 3]);
        }
    }
    if let Some((lo, hi)) = force.range() {
        a = a.max(lo);
        b = b.min(hi);
    }
    if !(a < b) {
        return Err(Failure::usage("track and force domains do not overlap"));
    }
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sup = 0.0f64;
    let mut sum_sq = 0.0;
    let mut f_max = 0.0f64;
    let shrink = 1.0 - 1e-12;
    for i in 0..n {
        let theta = std::f64::consts::PI * (2.0 * i as f64 + 1.0) / (2.0 * n as f64);
        let x = mid + half * shrink * theta.cos();
        let recon = restoring_force(track, x).map_err(model_err)?;
        let target = force.eval(x).map_err(model_err)?;
        let r = (recon - target).abs();
        sup = sup.max(r);
        sum_sq += r * r;
        f_max = f_max.max(target.abs());
    }
    let scale = 1.0 + f_max;
    Ok((sup / scale, (sum_sq / n as f64).sqrt() / scale))
}

// ---------------------------------------------------------------------------
// gsm

fn cmd_gsm(args: &GsmArgs, cfg: &Config) -> CliResult<u8> {
    let k1 = require(args.k1.or(cfg.gsm.k1), "--k1")?;
    let k2 = require(args.k2.or(cfg.gsm.k2), "--k2")?;
    let b = require(args.b.or(cfg.gsm.b), "--b")?;
    let l = require(args.l.or(cfg.gsm.l), "--l")?;
    let params = GsmParams::new(k1, k2, b, l).map_err(|e| Failure::usage(e.to_string()))?;
    let range = args.range.or(cfg.gsm.range).unwrap_or(0.75 * l);
    if !(range > 0.0 && range < l) {
        return Err(Failure::usage(format!(
            "--range must lie in (0, L) = (0, {l}), got {range}"
        )));
    }
    let samples = args.samples.or(cfg.gsm.samples).unwrap_or(201);
    if samples < 2 {
        return Err(Failure::usage("--samples must be at least 2"));
    }
    let mut out = String::from("Y,F,K\n");
    let mut fs = Vec::with_capacity(samples);
    let mut ks = Vec::with_capacity(samples);
    for i in 0..samples {
        let y = -range + 2.0 * range * i as f64 / (samples - 1) as f64;
        let f = gsm_force(&params, y).map_err(model_err)?;
        let k = gsm_stiffness(&params, y).map_err(model_err)?;
        let _ = writeln!(out, "{y},{f},{k}");
        fs.push((y, f));
        ks.push((y, k));
    }
    if let Some(path) = &args.svg {
        let chart = Chart::new("spring assembly response", "Y [m]", "F [N], K [N/m]")
            .series("F", fs)
            .series("K", ks);
        write_file(path, &chart.render())?;
    }
    write_output(args.out.as_deref(), &out)?;
    eprintln!("qzs={}", params.is_quasi_zero());
    Ok(0)
}

// ---------------------------------------------------------------------------

fn configure_threads() -> CliResult<()> {
    match std::env::var("CAMFORGE_THREADS") {
        Ok(v) => {
            let n: usize = v.parse().map_err(|_| {
                Failure::usage(format!("CAMFORGE_THREADS must be a non-negative integer, got {v:?}"))
            })?;
            if n > 0 {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .map_err(|e| Failure::usage(format!("cannot configure thread pool: {e}")))?;
            }
            Ok(())
        }
        Err(_) => Ok(()),
    }
}

fn run() -> CliResult<u8> {
    configure_threads()?;
    let cli = Cli::parse();
    let cfg = load_config(cli.config.as_deref())?;
    match &cli.command {
        Command::Design(args) => cmd_design(args, &cfg),
        Command::Simulate(args) => cmd_simulate(args, &cfg),
        Command::Verify(args) => cmd_verify(args, &cfg),
        Command::Gsm(args) => cmd_gsm(args, &cfg),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("camforge: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
