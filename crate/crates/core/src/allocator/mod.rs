//! Max-min power and bandwidth allocation.
//!
//! Maximize ζ subject to R_A ≥ εζ, R_B ≥ ζ and the power/bandwidth budgets.
//! Three solvers share one result type:
//!
//! * [`solve_orthogonal`]: exact (to tolerance) when the bands do not overlap.
//! * [`pso_solve`]: particle swarm search, valid for any overlap.
//! * [`grid_oracle`]: exhaustive grid search used to cross-check the other two.

mod oracle;
mod orthogonal;
mod pso;

use std::f64::consts::LN_2;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use oracle::grid_oracle;
pub use orthogonal::solve_orthogonal;
pub use pso::{pso_solve, PsoConfig, PsoCounters, PsoState};

use crate::ratemodel::{Allocation, RateReport, ScenarioParams};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SolverKind {
    #[serde(rename = "exact")]
    ExactOrthogonal,
    #[serde(rename = "pso")]
    Pso,
    #[serde(rename = "oracle")]
    GridOracle,
}

impl SolverKind {
    pub const ALL: [SolverKind; 3] = [
        SolverKind::ExactOrthogonal,
        SolverKind::Pso,
        SolverKind::GridOracle,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SolverKind::ExactOrthogonal => "exact",
            SolverKind::Pso => "pso",
            SolverKind::GridOracle => "oracle",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(SolverKind::ExactOrthogonal),
            "pso" => Ok(SolverKind::Pso),
            "oracle" => Ok(SolverKind::GridOracle),
            other => Err(Error::InvalidParameters(format!(
                "unknown solver {other:?}, expected exact, pso or oracle"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub allocation: Allocation,
    /// `evaluate(scn, allocation)`.
    pub report: RateReport,
    pub solver: SolverKind,
    pub iterations_used: usize,
    pub converged: bool,
}

impl SolveResult {
    /// The achieved max-min level ζ.
    pub fn zeta(&self) -> f64 {
        self.report.maxmin_level
    }
}

/// Least power that lets a single orthogonal link reach `rate_target` bits/s
/// over `bandwidth` Hz with channel gain `beta`.
///
/// Inverts the rate formula: (2^(R/(α_o B)) − 1) (σn² + σq²) B / β. Only
/// defined without band overlap, where the two links do not interact.
pub fn min_power_for_rate(
    rate_target: f64,
    bandwidth: f64,
    beta: f64,
    scn: &ScenarioParams,
) -> Result<f64> {
    if scn.overlap_flag() {
        return Err(Error::InvalidParameters(
            "power inversion needs orthogonal bands (zero overlap)".into(),
        ));
    }
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return Err(Error::InvalidParameters(format!(
            "bandwidth must be positive, got {bandwidth}"
        )));
    }
    if !(rate_target >= 0.0 && rate_target.is_finite()) {
        return Err(Error::InvalidParameters(format!(
            "rate target must be nonnegative, got {rate_target}"
        )));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameters(format!(
            "channel gain must be positive, got {beta}"
        )));
    }
    let (alpha_o, _) = scn.duplex_factors();
    let power = required_power(
        rate_target,
        bandwidth,
        beta,
        alpha_o,
        scn.noise_plus_interference(),
    );
    if power.is_finite() {
        Ok(power)
    } else {
        Err(Error::Infeasible(format!(
            "{rate_target} bit/s over {bandwidth} Hz needs more power than f64 can represent"
        )))
    }
}

/// Unchecked inversion; +inf once the spectral efficiency leaves f64 range.
pub(crate) fn required_power(
    rate: f64,
    bandwidth: f64,
    beta: f64,
    alpha_o: f64,
    density: f64,
) -> f64 {
    if rate == 0.0 {
        return 0.0;
    }
    if bandwidth <= 0.0 {
        return f64::INFINITY;
    }
    let bits_per_hz = rate / (alpha_o * bandwidth);
    (bits_per_hz * LN_2).exp_m1() * density * bandwidth / beta
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratemodel::tests::table_scenario;
    use crate::ratemodel::{access_rate, backhaul_rate, DuplexMode};

    #[test]
    fn zero_rate_needs_no_power() {
        let scn = table_scenario(DuplexMode::Fdd, 0.0);
        assert_eq!(min_power_for_rate(0.0, 1e6, 1e-12, &scn).unwrap(), 0.0);
    }

    #[test]
    fn one_bit_per_hertz() {
        for mode in DuplexMode::ALL {
            let scn = table_scenario(mode, 0.0);
            let (alpha_o, _) = scn.duplex_factors();
            let b = 3e6;
            let p = min_power_for_rate(alpha_o * b, b, 2e-12, &scn).unwrap();
            let expected = scn.noise_plus_interference() * b / 2e-12;
            assert!((p / expected - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn inversion_round_trip() {
        for mode in DuplexMode::ALL {
            let scn = table_scenario(mode, 0.0);
            for &(rate, bw) in &[(1e5, 1e6), (3e7, 1.5e7), (2.5e8, 2e7), (1e3, 1e3)] {
                let p = min_power_for_rate(rate, bw, scn.beta_ue(), &scn).unwrap();
                let r = access_rate(&scn, &Allocation::new(p, 0.0, bw, 1.0)).unwrap();
                assert!((r / rate - 1.0).abs() < 1e-9, "{mode} {rate} {bw}: {r}");
                let p = min_power_for_rate(rate, bw, scn.beta_bs(), &scn).unwrap();
                let r = backhaul_rate(&scn, &Allocation::new(0.0, p, 1.0, bw)).unwrap();
                assert!((r / rate - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn overflow_is_infeasible() {
        let scn = table_scenario(DuplexMode::Fdd, 0.0);
        assert!(matches!(
            min_power_for_rate(2e9, 1e6, 1e-12, &scn),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn bad_arguments() {
        let scn = table_scenario(DuplexMode::Fdd, 0.0);
        assert!(min_power_for_rate(1.0, 0.0, 1e-12, &scn).is_err());
        assert!(min_power_for_rate(-1.0, 1e6, 1e-12, &scn).is_err());
        let ovl = table_scenario(DuplexMode::Fdd, 1e6);
        assert!(min_power_for_rate(1.0, 1e6, 1e-12, &ovl).is_err());
    }

    #[test]
    fn solver_names() {
        for s in SolverKind::ALL {
            assert_eq!(s.as_str().parse::<SolverKind>().unwrap(), s);
        }
        assert!("cvx".parse::<SolverKind>().is_err());
    }
}
