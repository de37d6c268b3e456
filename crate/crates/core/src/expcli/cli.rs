//! `satiab` command line.
//!
//! Exit codes: 0 success, 1 invalid input (bad flags, config, failed audit),
//! 2 I/O failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use super::{
    audit, emit_plot, load_config, read_csv, run_overlap_sweep, run_power_sweep, run_single,
    write_csv, ExperimentConfig, SweepRow,
};
use crate::allocator::SolverKind;
use crate::{Error, Result};

/// Environment variable that overrides the config's PSO seed.
pub const SEED_ENV: &str = "SAT_IAB_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "satiab",
    version,
    about = "LEO satellite IAB power/bandwidth allocation experiments"
)]
pub struct Cli {
    /// JSON experiment config; defaults apply to missing keys (and to everything without a file).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// PSO seed. Takes precedence over SAT_IAB_SEED and the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory. Overrides the config's output_path.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Comma-separated solver list: exact,pso,oracle.
    #[arg(long, global = true, value_delimiter = ',')]
    pub solvers: Option<Vec<String>>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the configured scenario with each selected solver.
    Solve,
    /// Throughput vs transmit power (orthogonal bands).
    SweepPower,
    /// Throughput vs normalized bandwidth overlap.
    SweepOverlap,
    /// Brute-force grid search on the configured scenario.
    Oracle,
    /// Re-validate and re-evaluate every row of a result CSV.
    Audit {
        /// CSV written by solve, oracle or one of the sweeps.
        csv: PathBuf,
    },
}

/// Resolves the seed: CLI flag, then environment, then config.
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>, config: u64) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match env {
        Some(text) => text
            .trim()
            .parse()
            .map_err(|_| Error::Validation(vec![format!("{SEED_ENV}={text:?} is not a u64")])),
        None => Ok(config),
    }
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => load_config(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(list) = &cli.solvers {
        let solvers = list
            .iter()
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.parse::<SolverKind>())
            .collect::<Result<Vec<_>>>()?;
        cfg = cfg.with_solvers(solvers)?;
    }
    let env = std::env::var(SEED_ENV).ok();
    let seed = resolve_seed(cli.seed, env.as_deref(), cfg.pso.rng_seed)?;
    cfg = cfg.with_seed(seed);
    if let Some(out) = &cli.out {
        cfg = cfg.with_output_path(out.clone());
    }
    Ok(cfg)
}

fn output_dir(cfg: &ExperimentConfig) -> Result<&Path> {
    let dir = cfg.output_path.as_path();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    Ok(dir)
}

fn print_rows(rows: &[SweepRow]) {
    println!(
        "{:>8} {:>4} {:>7} {:>6} {:>7} {:>12} {:>12} {:>12} {:>12}",
        "x", "mode", "alt_km", "eps", "solver", "zeta_Mbps", "R_A_Mbps", "R_B_Mbps", "R_Mbps"
    );
    for r in rows {
        let head = format!(
            "{:>8.3} {:>4} {:>7} {:>6} {:>7}",
            r.x,
            r.duplex,
            r.altitude / 1e3,
            r.access_weight,
            r.solver
        );
        match &r.outcome {
            Ok(res) => {
                let rep = &res.report;
                println!(
                    "{head} {:>12.4} {:>12.4} {:>12.4} {:>12.4}",
                    rep.maxmin_level / 1e6,
                    rep.rate_access / 1e6,
                    rep.rate_backhaul / 1e6,
                    rep.throughput / 1e6
                );
            }
            Err(e) => println!("{head} error: {e}"),
        }
    }
}

fn write_outputs(cfg: &ExperimentConfig, rows: &[SweepRow], stem: &str, plot: bool) -> Result<()> {
    let dir = output_dir(cfg)?;
    let csv = dir.join(format!("{stem}.csv"));
    write_csv(rows, &csv)?;
    println!("wrote {}", csv.display());
    if plot {
        let svg = dir.join(format!("{stem}.svg"));
        emit_plot(rows, &svg)?;
        println!("wrote {}", svg.display());
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<i32> {
    let cfg = build_config(&cli)?;
    match cli.command {
        Command::Solve => {
            let rows = run_single(&cfg);
            print_rows(&rows);
            write_outputs(&cfg, &rows, "solve", false)?;
        }
        Command::Oracle => {
            let cfg = cfg.with_solvers(vec![SolverKind::GridOracle])?;
            let rows = run_single(&cfg);
            print_rows(&rows);
            write_outputs(&cfg, &rows, "oracle", false)?;
        }
        Command::SweepPower => {
            let rows = run_power_sweep(&cfg)?;
            print_rows(&rows);
            write_outputs(&cfg, &rows, "power_sweep", true)?;
        }
        Command::SweepOverlap => {
            let rows = run_overlap_sweep(&cfg)?;
            print_rows(&rows);
            write_outputs(&cfg, &rows, "overlap_sweep", true)?;
        }
        Command::Audit { csv } => {
            let rows = read_csv(&csv)?;
            let findings = audit(&cfg, &rows);
            let failed: Vec<_> = findings.iter().filter(|f| !f.passed()).collect();
            for f in &failed {
                println!("line {}: FAIL {}", f.line, f.problems.join("; "));
            }
            println!(
                "audited {} rows ({} skipped as failed solves): {} passed, {} failed",
                findings.len(),
                rows.len() - findings.len(),
                findings.len() - failed.len(),
                failed.len()
            );
            if !failed.is_empty() {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
