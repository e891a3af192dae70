//! `fracwave`: command-line experiments for the stochastic wave equation
//! driven by fractional noise.
//!
//! Exit codes: 0 success (or passing report), 2 usage or parameter error,
//! 3 indeterminate numeric verdict, 4 runtime or numeric failure (including
//! a report whose checks fail).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fracwave::bounds::{
    holder_space_experiment_with, holder_time_experiment_with, metric_ratio_scan, ratio_scan_grid,
    sup_growth_experiment_with, ExperimentReport, GridRule, HolderSpaceConfig, HolderTimeConfig, SupGrowthConfig,
};
use fracwave::field::SampleBatch;
use fracwave::kernels::KernelConfig;
use fracwave::solvability::{
    classify_numeric, condition_closed_form, g_profile, phase_diagram_scan, uniform, NumericVerdict,
    DEFAULT_LAMBDA_MAX, DEFAULT_N_CUTOFFS,
};
use fracwave::stats::linear_fit;
use fracwave::{HurstParams, DEFAULT_SEED};
use serde_json::json;

use fracwave_cli::output::{dump_batch, svg_line_plot, write_bytes, write_json, Csv};
use fracwave_cli::range;

#[derive(Parser, Debug)]
#[command(name = "fracwave", version, about = "Stochastic wave equation with fractional noise: experiments and tables")]
struct Cli {
    /// Directory that relative output paths are resolved against.
    #[arg(long, global = true, env = "FRACWAVE_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form existence verdict, optionally cross-checked numerically.
    Solvability(SolvabilityArgs),
    /// Table of g1(rho) on a uniform grid.
    G1Curve(G1Args),
    /// Closed-form and numeric verdicts over an (H0, |H|) grid.
    PhaseDiagram(PhaseArgs),
    /// Growth of E[sup u] with the horizon T and the half-width L.
    SupGrowth(SupGrowthArgs),
    /// Spatial Hölder exponent of the field.
    HolderSpace(HolderSpaceArgs),
    /// Temporal Hölder exponent of the field.
    HolderTime(HolderTimeArgs),
    /// Range of d1 / D1H over a structured grid.
    MetricRatio(MetricArgs),
}

#[derive(Args, Debug)]
struct SolvabilityArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    h0: f64,
    /// Spatial Hurst parameters, one per dimension.
    #[arg(long = "h", value_delimiter = ',', conflicts_with = "habs", required_unless_present = "habs")]
    h: Vec<f64>,
    /// Sum |H| with isotropic components |H|/d.
    #[arg(long)]
    habs: Option<f64>,
    /// Also classify the radial integral numerically.
    #[arg(long)]
    numeric: bool,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value = "solvability.json")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct G1Args {
    #[arg(long)]
    h0: f64,
    #[arg(long, default_value_t = 1000.0)]
    rho_max: f64,
    #[arg(long, default_value_t = 1001)]
    n_points: usize,
    #[arg(long, default_value = "g1_curve.csv")]
    out: PathBuf,
    /// Also write an SVG plot next to the table.
    #[arg(long)]
    svg: bool,
}

#[derive(Args, Debug)]
struct PhaseArgs {
    #[arg(long)]
    d: usize,
    /// H0 grid as start:stop:step.
    #[arg(long)]
    h0: String,
    /// |H| grid as start:stop:step.
    #[arg(long)]
    habs: String,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value = "phase_diagram.csv")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct McArgs {
    /// Spatial Hurst parameter of the time-white noise.
    #[arg(long = "h")]
    h: Option<f64>,
    #[arg(long)]
    n_reps: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Grid rule: dx <= dx_over_tmin * t_min.
    #[arg(long)]
    dx_over_tmin: Option<f64>,
    /// Grid rule: dt <= dt_over_t * T.
    #[arg(long)]
    dt_over_t: Option<f64>,
    /// Write every simulated batch as raw little-endian doubles.
    #[arg(long)]
    dump_fields: bool,
}

impl McArgs {
    fn grid_rule(&self, base: GridRule) -> GridRule {
        GridRule {
            dx_over_tmin: self.dx_over_tmin.unwrap_or(base.dx_over_tmin),
            dt_over_t: self.dt_over_t.unwrap_or(base.dt_over_t),
        }
    }
}

#[derive(Args, Debug)]
struct SupGrowthArgs {
    #[command(flatten)]
    mc: McArgs,
    #[arg(long, value_delimiter = ',')]
    t_list: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    l_list: Option<Vec<f64>>,
    #[arg(long)]
    t_ref: Option<f64>,
    #[arg(long, default_value = "sup_growth.json")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct HolderSpaceArgs {
    #[command(flatten)]
    mc: McArgs,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    l: Option<f64>,
    /// Spatial increments.
    #[arg(long, value_delimiter = ',')]
    steps: Option<Vec<f64>>,
    #[arg(long)]
    points_per_step: Option<f64>,
    #[arg(long, default_value = "holder_space.json")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct HolderTimeArgs {
    #[command(flatten)]
    mc: McArgs,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    t_compare: Option<f64>,
    #[arg(long)]
    l: Option<f64>,
    /// Temporal increments.
    #[arg(long, value_delimiter = ',')]
    taus: Option<Vec<f64>>,
    #[arg(long)]
    points_per_step: Option<f64>,
    #[arg(long, default_value = "holder_time.json")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct MetricArgs {
    #[arg(long = "h", default_value_t = 0.3)]
    h: f64,
    /// Refinement level of the built-in grid.
    #[arg(long, default_value_t = 0)]
    level: u32,
    /// Explicit time set, replacing the built-in one.
    #[arg(long, value_delimiter = ',')]
    times: Option<Vec<f64>>,
    /// Explicit spatial offsets, replacing the built-in ones.
    #[arg(long, value_delimiter = ',')]
    offsets: Option<Vec<f64>>,
    #[arg(long, default_value = "metric_ratio.json")]
    out: PathBuf,
}

/// How a command ended, mapped onto the exit code.
#[derive(Debug)]
enum Outcome {
    Ok,
    Usage(String),
    Indeterminate(String),
    Failure(String),
}

impl Outcome {
    fn code(&self) -> u8 {
        match self {
            Outcome::Ok => 0,
            Outcome::Usage(_) => 2,
            Outcome::Indeterminate(_) => 3,
            Outcome::Failure(_) => 4,
        }
    }
}

impl From<fracwave::Error> for Outcome {
    fn from(e: fracwave::Error) -> Self {
        use fracwave::Error::*;
        match e {
            Grid(_) | Factorization { .. } | Asymmetric(_) | Convergence { .. } => Outcome::Failure(e.to_string()),
            _ => Outcome::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Outcome {
    fn from(e: std::io::Error) -> Self {
        Outcome::Failure(format!("i/o: {e}"))
    }
}

type Run = Result<Outcome, Outcome>;

/// Everything a command needs besides its own flags.
#[derive(Debug, Clone)]
struct RunConfig {
    command: &'static str,
    out_dir: PathBuf,
}

impl RunConfig {
    fn path(&self, p: &Path) -> PathBuf {
        if p.is_absolute() { p.to_path_buf() } else { self.out_dir.join(p) }
    }

    /// Directory for raw field dumps that belong to the report at `out`.
    fn dump_dir(&self, out: &Path) -> PathBuf {
        let out = self.path(out);
        let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or(self.command);
        out.with_file_name(format!("{stem}_fields"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, result) = match &cli.command {
        Command::Solvability(a) => ("solvability", solvability(&run_config(&cli, "solvability"), a)),
        Command::G1Curve(a) => ("g1-curve", g1_curve(&run_config(&cli, "g1-curve"), a)),
        Command::PhaseDiagram(a) => ("phase-diagram", phase_diagram(&run_config(&cli, "phase-diagram"), a)),
        Command::SupGrowth(a) => ("sup-growth", sup_growth(&run_config(&cli, "sup-growth"), a)),
        Command::HolderSpace(a) => ("holder-space", holder_space(&run_config(&cli, "holder-space"), a)),
        Command::HolderTime(a) => ("holder-time", holder_time(&run_config(&cli, "holder-time"), a)),
        Command::MetricRatio(a) => ("metric-ratio", metric_ratio(&run_config(&cli, "metric-ratio"), a)),
    };
    let outcome = result.unwrap_or_else(|e| e);
    match &outcome {
        Outcome::Ok => {}
        Outcome::Usage(m) => eprintln!("fracwave {name}: error: {m}"),
        Outcome::Indeterminate(m) => eprintln!("fracwave {name}: indeterminate: {m}"),
        Outcome::Failure(m) => eprintln!("fracwave {name}: failed: {m}"),
    }
    ExitCode::from(outcome.code())
}

fn run_config(cli: &Cli, command: &'static str) -> RunConfig {
    RunConfig { command, out_dir: cli.out_dir.clone() }
}

fn solvability(rc: &RunConfig, a: &SolvabilityArgs) -> Run {
    let params = match a.habs {
        Some(habs) => HurstParams::isotropic(a.d, a.h0, habs)?,
        None => {
            if a.h.len() != a.d {
                return Err(Outcome::Usage(format!("--h has {} entries for d = {}", a.h.len(), a.d)));
            }
            HurstParams::new(a.h0, a.h.clone())?
        }
    };
    let mut verdict = condition_closed_form(&params)?;
    println!(
        "{} (margin {:.6}, regime {})",
        if verdict.solvable { "solvable" } else { "not solvable" },
        verdict.margin,
        verdict.regime.as_str()
    );
    let mut doc = json!({
        "d": params.d(),
        "h0": params.h0(),
        "h": params.h(),
        "habs": params.h_sum(),
        "t": a.t,
    });
    let mut outcome = Outcome::Ok;
    if a.numeric {
        let fit = classify_numeric(&params, a.t, DEFAULT_LAMBDA_MAX, DEFAULT_N_CUTOFFS)?;
        verdict.fitted_exponent = Some(fit.fitted_exponent);
        let agrees = match fit.verdict {
            NumericVerdict::Convergent => verdict.solvable,
            NumericVerdict::Divergent => !verdict.solvable,
            NumericVerdict::Indeterminate => false,
        };
        println!(
            "numeric: {} (increment slope {:.4}, R2 {:.4}); agrees with closed form: {agrees}",
            fit.verdict.as_str(),
            fit.fitted_exponent,
            fit.r_squared
        );
        doc["numeric"] = serde_json::to_value(&fit).map_err(|e| Outcome::Failure(e.to_string()))?;
        doc["agrees"] = json!(agrees);
        outcome = match fit.verdict {
            NumericVerdict::Indeterminate => Outcome::Indeterminate(format!("margin {:.4} is near critical", verdict.margin)),
            _ if !agrees => Outcome::Failure("numeric verdict contradicts the closed form".into()),
            _ => Outcome::Ok,
        };
    }
    doc["verdict"] = serde_json::to_value(&verdict).map_err(|e| Outcome::Failure(e.to_string()))?;
    write_json(&rc.path(&a.out), &doc)?;
    Ok(outcome)
}

fn g1_curve(rc: &RunConfig, a: &G1Args) -> Run {
    if a.n_points < 2 {
        return Err(Outcome::Usage(format!("--n-points must be at least 2, got {}", a.n_points)));
    }
    if !(a.rho_max > 0.0 && a.rho_max.is_finite()) {
        return Err(Outcome::Usage(format!("--rho-max must be positive, got {}", a.rho_max)));
    }
    if !(a.h0 > 0.5 && a.h0 <= 1.0) {
        return Err(Outcome::Usage(format!("--h0 must lie in (1/2, 1], got {}", a.h0)));
    }
    let rhos = uniform(0.0, a.rho_max, a.n_points);
    let prof = g_profile(&rhos, a.h0)?;
    let g1: Vec<f64> = prof.iter().map(|s| s.g1).collect();
    let mut csv = Csv::new(&["rho", "g1"]);
    for (r, v) in rhos.iter().zip(&g1) {
        csv.row(&[format!("{r}"), format!("{v:.15e}")]);
    }
    let out = rc.path(&a.out);
    csv.write(&out)?;

    // Line fit over the upper four fifths, value range over the last fifth.
    let (fit_lo, win_lo) = (0.2 * a.rho_max, 0.8 * a.rho_max);
    let (fx, fy): (Vec<f64>, Vec<f64>) = rhos.iter().zip(&g1).filter(|(r, _)| **r >= fit_lo).map(|(r, v)| (*r, *v)).unzip();
    let fit = if fx.len() >= 3 { Some(linear_fit(&fx, &fy)?) } else { None };
    let window: Vec<f64> = rhos.iter().zip(&g1).filter(|(r, _)| **r >= win_lo).map(|(_, v)| *v).collect();
    let sidecar = json!({
        "h0": a.h0,
        "rho_max": a.rho_max,
        "n_points": a.n_points,
        "fit": fit.map(|f| json!({ "rho_range": [fit_lo, a.rho_max], "slope": f.slope, "intercept": f.intercept, "r2": f.r_squared })),
        "window": {
            "rho_range": [win_lo, a.rho_max],
            "min": window.iter().copied().fold(f64::INFINITY, f64::min),
            "max": window.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        },
    });
    write_json(&out.with_extension("json"), &sidecar)?;
    if a.svg {
        write_bytes(&out.with_extension("svg"), svg_line_plot(&rhos, &g1, "rho", "g1").as_bytes())?;
    }
    match fit {
        Some(f) => println!("wrote {} ({} rows); slope {:.6}, R2 {:.6}", out.display(), rhos.len(), f.slope, f.r_squared),
        None => println!("wrote {} ({} rows)", out.display(), rhos.len()),
    }
    Ok(Outcome::Ok)
}

fn phase_diagram(rc: &RunConfig, a: &PhaseArgs) -> Run {
    let h0_grid = range::parse_grid(&a.h0).map_err(|e| Outcome::Usage(format!("--h0: {e}")))?;
    let habs_grid = range::parse_grid(&a.habs).map_err(|e| Outcome::Usage(format!("--habs: {e}")))?;
    if a.d == 0 {
        return Err(Outcome::Usage("--d must be positive".into()));
    }
    let rows = phase_diagram_scan(a.d, &h0_grid, &habs_grid, a.t)?;
    let mut csv = Csv::new(&["h0", "habs", "closed", "numeric", "margin", "flag"]);
    let mut disagreements = 0;
    for r in &rows {
        let flag = if r.near_critical {
            "near-critical"
        } else if !r.agrees() {
            disagreements += 1;
            "disagree"
        } else {
            "ok"
        };
        csv.row(&[
            format!("{}", r.h0),
            format!("{}", r.habs),
            if r.closed { "solvable" } else { "not-solvable" }.into(),
            r.numeric.as_str().into(),
            format!("{:.6}", r.margin),
            flag.into(),
        ]);
    }
    let out = rc.path(&a.out);
    csv.write(&out)?;
    println!("wrote {} ({} rows, {disagreements} disagreements outside the near-critical band)", out.display(), rows.len());
    if disagreements > 0 {
        return Ok(Outcome::Failure(format!("{disagreements} cells disagree")));
    }
    Ok(Outcome::Ok)
}

/// Runs an experiment, optionally dumping its fields, and writes the report.
fn run_experiment(
    rc: &RunConfig,
    mc: &McArgs,
    out: &Path,
    run: impl FnOnce(&mut dyn FnMut(usize, &SampleBatch) -> fracwave::Result<()>) -> fracwave::Result<ExperimentReport>,
) -> Run {
    let dump_dir = rc.dump_dir(out);
    let mut io_err = None;
    let mut sink = |cell: usize, batch: &SampleBatch| {
        if mc.dump_fields && io_err.is_none() {
            if let Err(e) = dump_batch(&dump_dir, cell, batch) {
                io_err = Some(e);
            }
        }
        Ok(())
    };
    let report = run(&mut sink)?;
    if let Some(e) = io_err {
        return Err(e.into());
    }
    let path = rc.path(out);
    write_json(&path, &report)?;
    for c in &report.checks {
        let (v, lo, hi) = (compact(c.value), compact(c.lo), compact(c.hi));
        println!("{:<28} {v:>12} in [{lo}, {hi}]: {}", c.name, if c.pass { "pass" } else { "FAIL" });
    }
    println!("wrote {}; {} in {:.1}s", path.display(), if report.pass { "pass" } else { "FAIL" }, report.runtime_s);
    if report.pass {
        Ok(Outcome::Ok)
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        Ok(Outcome::Failure(format!("checks failed: {}", failed.join(", "))))
    }
}

/// Fixed-point for moderate magnitudes, scientific otherwise.
fn compact(v: f64) -> String {
    if v == 0.0 || !v.is_finite() || (1e-3..1e6).contains(&v.abs()) {
        format!("{v:.4}")
    } else {
        format!("{v:.3e}")
    }
}

fn sup_growth(rc: &RunConfig, a: &SupGrowthArgs) -> Run {
    let d = SupGrowthConfig::default();
    let cfg = SupGrowthConfig {
        h: a.mc.h.unwrap_or(d.h),
        t_list: a.t_list.clone().unwrap_or(d.t_list),
        l_list: a.l_list.clone().unwrap_or(d.l_list),
        t_ref: a.t_ref.unwrap_or(d.t_ref),
        grid_rule: a.mc.grid_rule(d.grid_rule),
        n_reps: a.mc.n_reps.unwrap_or(d.n_reps),
        seed: a.mc.seed,
        kernel: KernelConfig::default(),
    };
    run_experiment(rc, &a.mc, &a.out, |sink| sup_growth_experiment_with(&cfg, sink))
}

fn holder_space(rc: &RunConfig, a: &HolderSpaceArgs) -> Run {
    let d = HolderSpaceConfig::default();
    let cfg = HolderSpaceConfig {
        h: a.mc.h.unwrap_or(d.h),
        t: a.t.unwrap_or(d.t),
        l: a.l.unwrap_or(d.l),
        h_list: a.steps.clone().unwrap_or(d.h_list),
        n_reps: a.mc.n_reps.unwrap_or(d.n_reps),
        seed: a.mc.seed,
        grid_rule: a.mc.grid_rule(d.grid_rule),
        points_per_step: a.points_per_step.unwrap_or(d.points_per_step),
        kernel: KernelConfig::default(),
    };
    run_experiment(rc, &a.mc, &a.out, |sink| holder_space_experiment_with(&cfg, sink))
}

fn holder_time(rc: &RunConfig, a: &HolderTimeArgs) -> Run {
    let d = HolderTimeConfig::default();
    let cfg = HolderTimeConfig {
        h: a.mc.h.unwrap_or(d.h),
        t: a.t.unwrap_or(d.t),
        t_compare: a.t_compare.unwrap_or(d.t_compare),
        l: a.l.unwrap_or(d.l),
        tau_list: a.taus.clone().unwrap_or(d.tau_list),
        n_reps: a.mc.n_reps.unwrap_or(d.n_reps),
        seed: a.mc.seed,
        grid_rule: a.mc.grid_rule(d.grid_rule),
        points_per_step: a.points_per_step.unwrap_or(d.points_per_step),
        kernel: KernelConfig::default(),
    };
    run_experiment(rc, &a.mc, &a.out, |sink| holder_time_experiment_with(&cfg, sink))
}

fn metric_ratio(rc: &RunConfig, a: &MetricArgs) -> Run {
    let (times, offsets) = ratio_scan_grid(a.level);
    let times = a.times.clone().unwrap_or(times);
    let offsets = a.offsets.clone().unwrap_or(offsets);
    let r = metric_ratio_scan(&times, &times, &offsets, a.h, &KernelConfig::default())?;
    let doc = json!({
        "h": r.h,
        "r_min": r.r_min(),
        "r_max": r.r_max(),
        "locations": { "min": r.min, "max": r.max },
        "n_evaluated": r.n_evaluated,
        "n_skipped": r.n_skipped,
        "t_set": r.t_set,
        "s_set": r.s_set,
        "dx_set": r.dx_set,
    });
    let out = rc.path(&a.out);
    write_json(&out, &doc)?;
    println!("r_min {:.6}, r_max {:.6} over {} pairs; wrote {}", r.r_min(), r.r_max(), r.n_evaluated, out.display());
    Ok(Outcome::Ok)
}
