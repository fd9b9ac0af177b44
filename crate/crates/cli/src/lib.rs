//! Command-line front end: `solve`, `measure`, `gen` and `bench`.
//!
//! Exit codes are part of the interface:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | converged (or command succeeded) |
//! | 1 | infeasibility certificate found |
//! | 2 | iteration limit or stall |
//! | 3 | error |
//! | 4 | `bench` saw a violated inequality |

mod bench;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use awaysteps::solvers::fw_gap;
use awaysteps::{
    certificate_check, condition_report, empirical_wf, fw_away_run, load_instance, make_example,
    make_figure1, random_instance, random_objective, vn_away_run, vn_run, write_trace_csv,
    Instance64, RandomMode, RunOptions, RunStatus, Iterate64,
};

pub use bench::{run_bench, BenchConfig, BenchRow, BENCH_HEADER};

pub const EXIT_CONVERGED: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_LIMIT: i32 = 2;
pub const EXIT_ERROR: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "awaysteps", version, about = "Away-step solvers and polytope condition measures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Vn,
    VnAway,
    FwAway,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Figure1,
    Example,
    Random,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a solver on an instance file.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "vn-away")]
        algo: Algo,
        /// Stopping tolerance on ‖y‖ for vn and vn-away.
        #[arg(long, default_value_t = 1e-8)]
        eps: f64,
        /// Stopping tolerance on the Frank-Wolfe gap for fw-away.
        #[arg(long, default_value_t = 1e-8)]
        gap_tol: f64,
        #[arg(long, default_value_t = 1_000_000)]
        max_iter: usize,
        /// Scale columns to unit length before solving.
        #[arg(long)]
        normalize: bool,
        /// Write the per-step trace (with y snapshots) as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Starting vertex, 1-based.
        #[arg(long, default_value_t = 1)]
        x0: usize,
    },
    /// Compute condition measures and write a JSON report.
    Measure {
        instance: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 64)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        normalize: bool,
    },
    /// Write a named or random instance as JSON.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        /// Example number (1, 2 or 3).
        #[arg(long, default_value_t = 1)]
        which: u8,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "interior")]
        mode: String,
        /// Attach a seeded positive-definite quadratic objective.
        #[arg(long)]
        objective: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare vn and vn-away on figure1 and seeded random families and
    /// audit every convergence inequality along the way.
    Bench {
        #[arg(long, default_value_t = 1e-8)]
        eps: f64,
        #[arg(long, default_value_t = 1_000_000)]
        max_iter: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random instances per family.
        #[arg(long, default_value_t = 3)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Runs a parsed command, printing to `out`, and returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> i32 {
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Solve { instance, algo, eps, gap_tol, max_iter, normalize, trace, x0 } => {
            cmd_solve(&instance, algo, eps, gap_tol, max_iter, normalize, trace.as_deref(), x0, out)
        }
        Command::Measure { instance, report, budget, seed, normalize } => {
            cmd_measure(&instance, report.as_deref(), budget, seed, normalize, out)
        }
        Command::Gen { kind, which, epsilon, delta, m, n, seed, mode, objective, out: path } => {
            cmd_gen(kind, which, epsilon, delta, m, n, seed, &mode, objective, path.as_deref(), out)
        }
        Command::Bench { eps, max_iter, seed, count, out: path } => {
            let cfg = BenchConfig { eps, max_iter, seed, count };
            cmd_bench(&cfg, path.as_deref(), out)
        }
    }
}

fn status_code(status: RunStatus) -> i32 {
    match status {
        RunStatus::Converged => EXIT_CONVERGED,
        RunStatus::InfeasibleCertificate => EXIT_INFEASIBLE,
        RunStatus::IterationLimit | RunStatus::Stalled => EXIT_LIMIT,
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    format!("[{}]", parts.join(", "))
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    path: &Path,
    algo: Algo,
    eps: f64,
    gap_tol: f64,
    max_iter: usize,
    normalize: bool,
    trace: Option<&Path>,
    x0: usize,
    out: &mut dyn Write,
) -> Result<i32> {
    if !(eps > 0.0) || !(gap_tol > 0.0) || max_iter == 0 {
        bail!("--eps and --gap-tol must be positive and --max-iter at least 1");
    }
    let mut inst: Instance64 = load_instance(path).with_context(|| format!("loading {}", path.display()))?;
    if normalize {
        inst = inst.normalize_columns()?;
    }
    if algo != Algo::FwAway && !inst.is_normalized() {
        bail!("{:?} needs unit columns; pass --normalize", algo);
    }
    if x0 == 0 || x0 > inst.n() {
        bail!("--x0 must lie in 1..={}", inst.n());
    }
    let start = Iterate64::vertex(&inst, x0 - 1)?;
    let tol = if algo == Algo::FwAway { gap_tol } else { eps };
    let mut opts = RunOptions::new(tol, max_iter);
    if trace.is_some() {
        opts = opts.with_snapshots();
    }
    let res = match algo {
        Algo::Vn => vn_run(&inst, start, opts)?,
        Algo::VnAway => vn_away_run(&inst, start, opts)?,
        Algo::FwAway => {
            let obj = inst
                .objective()
                .context("fw-away needs an objective in the instance file")?
                .clone();
            fw_away_run(&inst, &obj, start, opts)?
        }
    };
    if let Some(p) = trace {
        let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
        write_trace_csv(&res.trace, BufWriter::new(f))?;
    }
    writeln!(out, "status: {}", res.status.as_str())?;
    writeln!(out, "iterations: {}", res.iterations)?;
    match algo {
        Algo::FwAway => {
            let obj = inst.objective().expect("checked above");
            writeln!(out, "objective: {}", obj.value(res.iterate.y()))?;
            writeln!(out, "fw gap: {}", fw_gap(&inst, obj, res.iterate.y()))?;
        }
        _ => writeln!(out, "final norm: {}", awaysteps::linalg::norm(res.iterate.y()))?,
    }
    writeln!(out, "y: {}", fmt_vec(res.iterate.y()))?;
    if let Some(cert) = &res.certificate {
        let verified = certificate_check(&inst, cert);
        let min_ip = inst
            .inner_products(cert)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        writeln!(out, "certificate: {}", fmt_vec(cert))?;
        writeln!(out, "certificate verified: {verified} (min inner product {min_ip})")?;
        if !verified {
            bail!("returned certificate failed re-verification");
        }
    }
    for w in &res.warnings {
        writeln!(out, "warning: {w}")?;
    }
    Ok(status_code(res.status))
}

fn cmd_measure(
    path: &Path,
    report_path: Option<&Path>,
    budget: usize,
    seed: u64,
    normalize: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let mut inst: Instance64 = load_instance(path).with_context(|| format!("loading {}", path.display()))?;
    if normalize {
        inst = inst.normalize_columns()?;
    }
    writeln!(out, "# seed = {seed}")?;
    let mut report = condition_report(&inst, budget, seed)?;
    if let Some(obj) = inst.objective() {
        let start = Iterate64::vertex(&inst, 0)?;
        let run = fw_away_run(&inst, obj, start, RunOptions::new(1e-12, 100_000).with_path())?;
        let gap = run.final_gap.unwrap_or(0.0);
        let f_lower = obj.value(run.iterate.y()) - gap.max(0.0);
        match empirical_wf(&inst, obj, &run.trace.path, f_lower) {
            Ok(v) => report.w_f = Some(v),
            Err(e) => {
                report.errors.insert("w_f".into(), e.to_string());
            }
        }
    }
    let json = serde_json::to_string_pretty(&report)?;
    match report_path {
        Some(p) => std::fs::write(p, &json).with_context(|| format!("writing {}", p.display()))?,
        None => writeln!(out, "{json}")?,
    }
    let show = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{x}"));
    writeln!(out, "theorem3 case: {}", report.theorem3_case.as_deref().unwrap_or("n/a"))?;
    writeln!(out, "phi_lower: {}", show(report.phi_lower))?;
    writeln!(out, "phi_upper: {}", show(report.phi_upper))?;
    writeln!(out, "w_upper: {}", show(report.w_upper))?;
    let flag = |f: Option<bool>| f.map_or("n/a", |b| if b { "true" } else { "false" });
    let fl = &report.flags;
    writeln!(out, "prop1_ok: {}", flag(fl.prop1_ok))?;
    writeln!(out, "cor1_ok: {}", flag(fl.cor1_ok))?;
    writeln!(out, "sandwich_ok: {}", flag(fl.sandwich_ok))?;
    writeln!(out, "rho_bound_ok: {}", flag(fl.rho_bound_ok))?;
    writeln!(out, "w_bound_ok: {}", flag(fl.w_bound_ok))?;
    for (k, v) in &report.errors {
        writeln!(out, "unavailable {k}: {v}")?;
    }
    Ok(EXIT_CONVERGED)
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    kind: GenKind,
    which: u8,
    epsilon: f64,
    delta: f64,
    m: usize,
    n: usize,
    seed: u64,
    mode: &str,
    objective: bool,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32> {
    let mut inst: Instance64 = match kind {
        GenKind::Figure1 => make_figure1(),
        GenKind::Example => make_example(which, epsilon, delta)?,
        GenKind::Random => random_instance(m, n, seed, mode.parse::<RandomMode>()?)?,
    };
    if objective {
        let obj = random_objective(inst.m(), seed)?;
        inst = inst.with_objective(obj)?;
    }
    let json = awaysteps::instance::instance_to_json(&inst)?;
    match path {
        Some(p) => std::fs::write(p, json).with_context(|| format!("writing {}", p.display()))?,
        None => writeln!(out, "{json}")?,
    }
    Ok(EXIT_CONVERGED)
}

fn cmd_bench(cfg: &BenchConfig, path: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    writeln!(out, "# seed = {}", cfg.seed)?;
    let rows = run_bench(cfg)?;
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(BENCH_HEADER.split(','))?;
        for r in &rows {
            w.write_record(r.record())?;
        }
        w.flush()?;
    }
    match path {
        Some(p) => std::fs::write(p, &buf).with_context(|| format!("writing {}", p.display()))?,
        None => out.write_all(&buf)?,
    }
    let worst = rows.iter().map(|r| r.max_violation).fold(0.0, f64::max);
    let failures = rows.iter().filter(|r| r.max_violation > 0.0).count();
    writeln!(out, "violations: {failures} (largest {worst})")?;
    Ok(if failures == 0 { EXIT_CONVERGED } else { EXIT_VIOLATION })
}
