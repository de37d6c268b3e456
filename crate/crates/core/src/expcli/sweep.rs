//! Power and overlap sweeps.

use std::fmt;

use rayon::prelude::*;

use super::config::{ExperimentConfig, ScenarioConfig, SweepKind};
use crate::allocator::{grid_oracle, pso_solve, solve_orthogonal, SolveResult, SolverKind};
use crate::linkbudget::watts_to_dbm;
use crate::ratemodel::DuplexMode;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    /// One solve of the configured scenario.
    Single,
    /// x is total transmit power in dBm.
    Power,
    /// x is the overlap w_o / W.
    Overlap,
}

impl SweepAxis {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepAxis::Single => "single",
            SweepAxis::Power => "power",
            SweepAxis::Overlap => "overlap",
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(SweepAxis::Single),
            "power" => Ok(SweepAxis::Power),
            "overlap" => Ok(SweepAxis::Overlap),
            _ => Err(Error::InvalidParameters(format!(
                "unknown sweep axis {s:?}"
            ))),
        }
    }
}

/// One solver run at one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis: SweepAxis,
    /// Independent variable: dBm for power sweeps, w_o/W for overlap sweeps.
    pub x: f64,
    pub duplex: DuplexMode,
    /// Meters.
    pub altitude: f64,
    pub access_weight: f64,
    pub total_power_dbm: f64,
    pub overlap_fraction: f64,
    pub solver: SolverKind,
    /// Solver failures are kept per row; a sweep never aborts on one.
    pub outcome: std::result::Result<SolveResult, String>,
}

impl SweepRow {
    pub fn result(&self) -> Option<&SolveResult> {
        self.outcome.as_ref().ok()
    }

    /// Series key for plots: everything but the x value.
    pub fn series_label(&self) -> String {
        let mut label = format!(
            "{} {} {} km",
            self.solver,
            self.duplex,
            fmt_plain(self.altitude / 1e3)
        );
        if self.axis == SweepAxis::Overlap {
            label.push_str(&format!(" eps={}", fmt_plain(self.access_weight)));
        }
        label
    }
}

fn fmt_plain(v: f64) -> String {
    format!("{v}")
}

#[derive(Debug, Clone, Copy)]
struct Job {
    axis: SweepAxis,
    x: f64,
    scenario: ScenarioConfig,
    overlap_fraction: f64,
    solver: SolverKind,
}

fn run_jobs(cfg: &ExperimentConfig, jobs: Vec<Job>) -> Vec<SweepRow> {
    jobs.into_par_iter()
        .map(|job| {
            let outcome = solve_one(cfg, &job.scenario, job.solver).map_err(|e| e.to_string());
            SweepRow {
                axis: job.axis,
                x: job.x,
                duplex: job.scenario.duplex,
                altitude: job.scenario.satellite.altitude,
                access_weight: job.scenario.access_weight,
                total_power_dbm: watts_to_dbm(job.scenario.total_power),
                overlap_fraction: job.overlap_fraction,
                solver: job.solver,
                outcome,
            }
        })
        .collect()
}

/// Runs one solver on one scenario with the experiment's solver settings.
pub fn solve_one(
    cfg: &ExperimentConfig,
    scenario: &ScenarioConfig,
    solver: SolverKind,
) -> Result<SolveResult> {
    let scn = scenario.params()?;
    match solver {
        SolverKind::ExactOrthogonal => solve_orthogonal(&scn),
        SolverKind::Pso => pso_solve(&scn, &cfg.pso),
        SolverKind::GridOracle => grid_oracle(&scn, cfg.oracle_resolution),
    }
}

/// Every selected solver on the configured scenario, in solver order.
pub fn run_single(cfg: &ExperimentConfig) -> Vec<SweepRow> {
    let s = cfg.scenario;
    let fraction = s.overlap_bandwidth / s.total_bandwidth;
    let jobs = cfg
        .solvers
        .iter()
        .map(|&solver| Job {
            axis: SweepAxis::Single,
            x: watts_to_dbm(s.total_power),
            scenario: s,
            overlap_fraction: fraction,
            solver,
        })
        .collect();
    run_jobs(cfg, jobs)
}

fn power_points(cfg: &ExperimentConfig) -> Vec<f64> {
    let (min_dbm, max_dbm, step_db) = match cfg.sweep {
        SweepKind::Power {
            min_dbm,
            max_dbm,
            step_db,
        } => (min_dbm, max_dbm, step_db),
        _ => (40.0, 50.0, 1.0),
    };
    // small slack so that e.g. 40..50 step 0.1 keeps its endpoint
    let count = ((max_dbm - min_dbm) / step_db + 1e-9).floor() as usize + 1;
    (0..count).map(|i| min_dbm + i as f64 * step_db).collect()
}

fn overlap_points(cfg: &ExperimentConfig) -> Vec<f64> {
    let points = match cfg.sweep {
        SweepKind::Overlap { points } => points,
        _ => 11,
    };
    let last = (points - 1) as f64;
    (0..points).map(|i| i as f64 / last).collect()
}

/// Throughput against transmit power with orthogonal bands.
///
/// For every power level (config range, default 40..=50 dBm in 1 dB steps),
/// duplex mode and sweep altitude, runs each selected solver. Rows are ordered
/// by power, then mode, then altitude, then solver.
pub fn run_power_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    if cfg.scenario.overlap_bandwidth != 0.0 {
        return Err(Error::Validation(vec![
            "power sweep needs orthogonal bands (overlap_mhz = 0)".into(),
        ]));
    }
    let mut jobs = Vec::new();
    for dbm in power_points(cfg) {
        for mode in DuplexMode::ALL {
            for &altitude in &cfg.sweep_altitudes {
                for &solver in &cfg.solvers {
                    jobs.push(Job {
                        axis: SweepAxis::Power,
                        x: dbm,
                        scenario: cfg
                            .scenario
                            .with_power_dbm(dbm)
                            .with_duplex(mode)
                            .at_altitude(altitude),
                        overlap_fraction: 0.0,
                        solver,
                    });
                }
            }
        }
    }
    Ok(run_jobs(cfg, jobs))
}

/// Throughput against the normalized overlap w_o/W.
///
/// Sweeps w_o/W evenly over [0, 1] (default 11 points) at the configured
/// power and altitude, for each duplex mode and each sweep access weight.
/// The swarm runs at every point; the exact solver is added at w_o = 0 as a
/// cross-check; the grid oracle runs everywhere when selected. Rows are
/// ordered by overlap, then mode, then altitude, then access weight, then
/// solver.
pub fn run_overlap_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    if !cfg.uses(SolverKind::Pso) {
        return Err(Error::Validation(vec![
            "overlap sweep needs the pso solver selected".into(),
        ]));
    }
    let mut jobs = Vec::new();
    for fraction in overlap_points(cfg) {
        for mode in DuplexMode::ALL {
            for &eps in &cfg.sweep_access_weights {
                for solver in SolverKind::ALL {
                    let wanted = match solver {
                        SolverKind::ExactOrthogonal => fraction == 0.0,
                        SolverKind::Pso => true,
                        SolverKind::GridOracle => cfg.uses(SolverKind::GridOracle),
                    };
                    if !wanted {
                        continue;
                    }
                    jobs.push(Job {
                        axis: SweepAxis::Overlap,
                        x: fraction,
                        scenario: cfg
                            .scenario
                            .with_overlap_fraction(fraction)
                            .with_duplex(mode)
                            .with_access_weight(eps),
                        overlap_fraction: fraction,
                        solver,
                    });
                }
            }
        }
    }
    Ok(run_jobs(cfg, jobs))
}
