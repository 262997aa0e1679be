//! `edgekernel` - drive the kernel experiments from key-value config files.
//!
//! ```text
//! edgekernel <subcommand> --config <path> [--out <path>]
//!
//! subcommands:
//!   recurrence                    emit recurrence coefficients as CSV
//!   kernel                        print one reproducing-kernel value
//!   christoffel                   Christoffel function over an x-grid as CSV
//!   bessel                        print J_a(z), J_a'(z), or the Bessel kernel
//!   experiment <kind>             run a convergence experiment; kinds:
//!                                 edge | ratio | localization | smoothing |
//!                                 bulk | inequalities
//! ```
//!
//! Exit code 0 when the run passes, 2 when an experiment's assertions fail,
//! 1 on config or I/O errors.

use edgekernel_core::experiment::{
    check_kernel_inequalities, run_bulk_sine, run_christoffel_ratio, run_edge_universality,
    run_localization, run_smoothing, ConfigMap, ConvergenceReport, ExperimentConfig,
    InequalityReport,
};
use edgekernel_core::limits::{bessel_j, bessel_j_prime, bessel_kernel};
use edgekernel_core::measure::MeasureSpec;
use edgekernel_core::quadrature::composite_quadrature;
use edgekernel_core::recurrence::{
    jacobi_recurrence_closed_form, stieltjes_recurrence, RecurrenceTable,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const USAGE: &str = "usage: edgekernel <subcommand> --config <path> [--out <path>]
subcommands: recurrence | kernel | christoffel | bessel | experiment <edge|ratio|localization|smoothing|bulk|inequalities>";

type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--help" || a == "-h") {
        println!("{USAGE}");
        return ExitCode::SUCCESS;
    }
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(error) => {
            eprintln!("error: {error}");
            let mut source = error.source();
            while let Some(inner) = source {
                eprintln!("  caused by: {inner}");
                source = inner.source();
            }
            ExitCode::from(1)
        }
    }
}

struct Invocation {
    subcommand: String,
    experiment_kind: Option<String>,
    config: PathBuf,
    out: Option<PathBuf>,
}

fn parse_args(args: &[String]) -> CliResult<Invocation> {
    let mut positional = Vec::new();
    let mut config = None;
    let mut out = None;
    let mut i = 0;
    while i < args.len() {
        match args[i].as_str() {
            "--config" => {
                i += 1;
                config = Some(PathBuf::from(args.get(i).ok_or("--config needs a path")?));
            }
            "--out" => {
                i += 1;
                out = Some(PathBuf::from(args.get(i).ok_or("--out needs a path")?));
            }
            flag if flag.starts_with("--") => {
                return Err(format!("unknown flag `{flag}`\n{USAGE}").into());
            }
            value => positional.push(value.to_string()),
        }
        i += 1;
    }
    let mut positional = positional.into_iter();
    let subcommand = positional
        .next()
        .ok_or_else(|| format!("missing subcommand\n{USAGE}"))?;
    let experiment_kind = if subcommand == "experiment" {
        Some(
            positional
                .next()
                .ok_or_else(|| format!("`experiment` needs a kind\n{USAGE}"))?,
        )
    } else {
        None
    };
    if positional.next().is_some() {
        return Err(format!("too many arguments\n{USAGE}").into());
    }
    let config = config.ok_or_else(|| format!("missing --config\n{USAGE}"))?;
    Ok(Invocation {
        subcommand,
        experiment_kind,
        config,
        out,
    })
}

fn run(args: &[String]) -> CliResult<bool> {
    let invocation = parse_args(args)?;
    let map = ConfigMap::from_file(&invocation.config)?;
    match invocation.subcommand.as_str() {
        "recurrence" => {
            let csv = recurrence_csv(&map)?;
            emit(&invocation, &map, &csv)?;
            Ok(true)
        }
        "kernel" => {
            let value = kernel_value(&map)?;
            emit(
                &invocation,
                &map,
                &format!("{}\n", format_significant(value)),
            )?;
            Ok(true)
        }
        "christoffel" => {
            let csv = christoffel_csv(&map)?;
            emit(&invocation, &map, &csv)?;
            Ok(true)
        }
        "bessel" => {
            let value = bessel_value(&map)?;
            emit(
                &invocation,
                &map,
                &format!("{}\n", format_significant(value)),
            )?;
            Ok(true)
        }
        "experiment" => {
            let kind = invocation.experiment_kind.as_deref().unwrap_or_default();
            let cfg = ExperimentConfig::from_map(&map)?;
            let (csv, json, pass, notes) = match kind {
                "edge" => summarize(run_edge_universality(&cfg)?),
                "ratio" => summarize(run_christoffel_ratio(&cfg)?),
                "localization" => summarize(run_localization(&cfg)?),
                "smoothing" => summarize(run_smoothing(&cfg)?),
                "bulk" => summarize(run_bulk_sine(&cfg)?),
                "inequalities" => summarize_inequalities(check_kernel_inequalities(&cfg)?),
                other => return Err(format!("unknown experiment kind `{other}`\n{USAGE}").into()),
            };
            let target = invocation.out.clone().or_else(|| cfg.output.clone());
            match target {
                Some(path) => write_file(&path, &csv)?,
                None => print!("{csv}"),
            }
            for note in &notes {
                eprintln!("# {note}");
            }
            println!("{json}");
            Ok(pass)
        }
        other => Err(format!("unknown subcommand `{other}`\n{USAGE}").into()),
    }
}

fn summarize(report: ConvergenceReport) -> (String, String, bool, Vec<String>) {
    (
        report.to_csv(),
        report.to_json_summary(),
        report.pass,
        report.notes.clone(),
    )
}

fn summarize_inequalities(report: InequalityReport) -> (String, String, bool, Vec<String>) {
    (
        report.to_csv(),
        report.to_json_summary(),
        report.pass,
        report.notes.clone(),
    )
}

/// Resolve the output target for the non-experiment subcommands.
fn emit(invocation: &Invocation, map: &ConfigMap, text: &str) -> CliResult<()> {
    let target = invocation
        .out
        .clone()
        .or_else(|| map.get("output").map(PathBuf::from));
    match target {
        Some(path) => write_file(&path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    Ok(())
}

/// Measure described by the shared config keys (alpha, beta, h, rho, piece).
fn measure_from_map(map: &ConfigMap) -> CliResult<MeasureSpec> {
    // ExperimentConfig performs the full validation; reuse it and discard the
    // experiment-only fields.
    let cfg = ExperimentConfig::from_map(map)?;
    Ok(cfg.measure)
}

fn build_table(spec: &MeasureSpec, n_max: usize) -> CliResult<RecurrenceTable> {
    match spec.constant_smooth_factor() {
        Some(c) => Ok(
            jacobi_recurrence_closed_form(spec.alpha(), spec.beta(), n_max)?.with_mass_scaled(c),
        ),
        None => {
            let rule = composite_quadrature(spec, 2 * n_max + 16)?;
            Ok(stieltjes_recurrence(spec, n_max, &rule)?)
        }
    }
}

/// CSV of recurrence coefficients: row n carries `a_n` (empty at n = 0, the
/// off-diagonal starts at a_1) and `b_n` (empty at n = n_max); the mass rides
/// in a comment line.
fn recurrence_csv(map: &ConfigMap) -> CliResult<String> {
    let spec = measure_from_map(map)?;
    let n_max = map.usize_opt("n_max")?.unwrap_or(64);
    if n_max == 0 {
        return Err("n_max must be positive".into());
    }
    let table = build_table(&spec, n_max)?;
    let mut out = String::new();
    out.push_str(&format!("# mass={}\n", fmt(table.mass())));
    out.push_str("n,a_n,b_n\n");
    out.push_str(&format!("0,,{}\n", fmt(table.b_coeff(0))));
    for n in 1..n_max {
        out.push_str(&format!(
            "{n},{},{}\n",
            fmt(table.a_coeff(n)),
            fmt(table.b_coeff(n))
        ));
    }
    out.push_str(&format!("{n_max},{},\n", fmt(table.a_coeff(n_max))));
    Ok(out)
}

fn kernel_value(map: &ConfigMap) -> CliResult<f64> {
    let spec = measure_from_map(map)?;
    let n = map.usize_opt("n")?.ok_or("missing required key `n`")?;
    let x = map.f64_required("x")?;
    let y = map.f64_required("y")?;
    let table = build_table(&spec, n)?;
    let evaluator = edgekernel_core::KernelEvaluator::new(spec, table);
    Ok(evaluator.kernel(n, x, y)?)
}

fn christoffel_csv(map: &ConfigMap) -> CliResult<String> {
    let spec = measure_from_map(map)?;
    let n = map.usize_opt("n")?.ok_or("missing required key `n`")?;
    let grid = match map.list_f64("x_grid")? {
        Some(grid) => grid,
        None => {
            let lo = map.f64_opt("x_min")?.unwrap_or(-0.9);
            let hi = map.f64_opt("x_max")?.unwrap_or(0.9);
            let count = map.usize_opt("x_count")?.unwrap_or(19);
            if count < 1 {
                return Err("x_count must be positive".into());
            }
            (0..count)
                .map(|i| {
                    if count == 1 {
                        lo
                    } else {
                        lo + (hi - lo) * i as f64 / (count - 1) as f64
                    }
                })
                .collect()
        }
    };
    let table = build_table(&spec, n)?;
    let evaluator = edgekernel_core::KernelEvaluator::new(spec, table);
    let mut out = String::from("x,lambda_n\n");
    for x in grid {
        out.push_str(&format!(
            "{},{}\n",
            fmt(x),
            fmt(evaluator.christoffel(n, x)?)
        ));
    }
    Ok(out)
}

fn bessel_value(map: &ConfigMap) -> CliResult<f64> {
    let order = map.f64_required("order")?;
    match map.get("quantity").unwrap_or("j") {
        "j" => Ok(bessel_j(order, map.f64_required("z")?)?),
        "jprime" => Ok(bessel_j_prime(order, map.f64_required("z")?)?),
        "kernel" => Ok(bessel_kernel(
            order,
            map.f64_required("u")?,
            map.f64_required("v")?,
        )?),
        other => Err(format!("unknown quantity `{other}` (expected j, jprime, kernel)").into()),
    }
}

fn fmt(value: f64) -> String {
    edgekernel_core::experiment::report::fmt_f64(value)
}

/// Plain decimal with 15 significant digits; scientific only when the plain
/// form would be unreadable.
fn format_significant(value: f64) -> String {
    if value == 0.0 {
        return "0.00000000000000".to_string();
    }
    if !value.is_finite() {
        return format!("{value}");
    }
    let magnitude = value.abs().log10().floor() as i32;
    if (-4..15).contains(&magnitude) {
        let decimals = (14 - magnitude).max(0) as usize;
        format!("{value:.decimals$}")
    } else {
        format!("{value:.14e}")
    }
}
