//! Brute-force grid search over the feasible allocations.

use super::{SolveResult, SolverKind};
use crate::ratemodel::{evaluate, Allocation, ScenarioParams};
use crate::{Error, Result};

/// Best max-min level on a uniform grid.
///
/// P_UE takes `resolution + 1` evenly spaced values in [0, P] with
/// P_BS = P − P_UE; W_A takes `resolution + 1` values in [α_1 w_o, α_1 W] with
/// W_B = α_1 (W + w_o) − W_A, so the bandwidth budget is always spent and
/// both per-link limits hold. Grids whose resolutions divide each other are
/// nested. Ties keep the first point visited.
pub fn grid_oracle(scn: &ScenarioParams, resolution: usize) -> Result<SolveResult> {
    if resolution < 10 {
        return Err(Error::InvalidParameters(format!(
            "grid resolution must be at least 10, got {resolution}"
        )));
    }
    let power = scn.total_power();
    let floor = scn.bandwidth_floor();
    let cap = scn.bandwidth_cap();
    let budget = scn.bandwidth_budget();
    let n = resolution as f64;

    let mut best: Option<(Allocation, f64)> = None;
    for i in 0..=resolution {
        let p_ue = power * (i as f64 / n);
        let p_bs = power - p_ue;
        for j in 0..=resolution {
            let w_a = floor + (cap - floor) * (j as f64 / n);
            let w_b = budget - w_a;
            let alloc = Allocation::new(p_ue, p_bs, w_a, w_b);
            let Ok(report) = evaluate(scn, &alloc) else {
                continue;
            };
            if best.is_none_or(|(_, z)| report.maxmin_level > z) {
                best = Some((alloc, report.maxmin_level));
            }
        }
    }
    let (allocation, _) =
        best.ok_or_else(|| Error::Infeasible("no grid point could be evaluated".into()))?;
    Ok(SolveResult {
        allocation,
        report: evaluate(scn, &allocation)?,
        solver: SolverKind::GridOracle,
        iterations_used: (resolution + 1) * (resolution + 1),
        converged: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::allocator::solve_orthogonal;
    use crate::ratemodel::tests::table_scenario;
    use crate::ratemodel::{validate, DuplexMode};

    #[test]
    fn resolution_floor() {
        let scn = table_scenario(DuplexMode::Fdd, 0.0);
        assert!(grid_oracle(&scn, 9).is_err());
        assert!(grid_oracle(&scn, 10).is_ok());
    }

    #[test]
    fn refinement_never_loses() {
        for (mode, overlap) in [
            (DuplexMode::Fdd, 0.0),
            (DuplexMode::Tdd, 0.0),
            (DuplexMode::Fdd, 12e6),
            (DuplexMode::Tdd, 40e6),
        ] {
            let scn = table_scenario(mode, overlap);
            let coarse = grid_oracle(&scn, 10).unwrap().zeta();
            let fine = grid_oracle(&scn, 100).unwrap().zeta();
            assert!(fine >= coarse * (1.0 - 1e-12), "{mode} {overlap}");
        }
    }

    #[test]
    fn symmetric_scenario_lands_mid_grid() {
        let scn = table_scenario(DuplexMode::Fdd, 0.0)
            .with_gains(1e-10, 1e-10)
            .unwrap()
            .with_access_weight(1.0)
            .unwrap();
        let res = grid_oracle(&scn, 20).unwrap();
        let cell_p = scn.total_power() / 20.0;
        let cell_w = scn.bandwidth_cap() / 20.0;
        assert!((res.allocation.p_ue - 5.0).abs() <= cell_p);
        assert!((res.allocation.w_a - scn.bandwidth_cap() / 2.0).abs() <= cell_w);
    }

    #[test]
    fn agrees_with_exact_solver() {
        for mode in DuplexMode::ALL {
            let scn = table_scenario(mode, 0.0);
            let exact = solve_orthogonal(&scn).unwrap().zeta();
            let grid = grid_oracle(&scn, 200).unwrap();
            assert!(validate(&scn, &grid.allocation, 1e-6).is_empty());
            assert!(grid.zeta() <= exact * (1.0 + 1e-9));
            assert!((exact - grid.zeta()) / exact <= 0.01);
        }
    }
}
