//! Exact max-min allocation for orthogonal access/backhaul bands.
//!
//! Without overlap the links only couple through the shared budgets. For a
//! candidate level ζ the cheapest way to meet both targets is
//!
//! ```text
//! min over W_A of  p_A(εζ, W_A) + p_B(ζ, α_1 W − W_A)
//! ```
//!
//! where p(R, B) inverts the rate formula. Each p is convex in B, so the inner
//! problem is a 1-D convex minimization (golden section). ζ is feasible iff
//! that minimum fits in P, which is monotone in ζ, so the outer search is a
//! bisection. All bandwidth is used: rates grow strictly with own bandwidth.

use super::{required_power, SolveResult, SolverKind};
use crate::ratemodel::{evaluate, Allocation, ScenarioParams};
use crate::{Error, Result};

const MAX_BISECTIONS: usize = 200;
/// Relative width at which the ζ bracket counts as converged.
const ZETA_REL_TOL: f64 = 1e-13;
/// Golden-section stopping width, relative to the bandwidth being split.
const SPLIT_REL_TOL: f64 = 1e-9;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Minimizes a unimodal `f` on (lo, hi). Returns (argmin, min).
pub(crate) fn golden_section(f: impl Fn(f64) -> f64, lo: f64, hi: f64, rel_tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let stop = rel_tol * (hi - lo);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > stop {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

struct Split {
    w_a: f64,
    p_ue: f64,
    p_bs: f64,
}

struct Problem<'a> {
    scn: &'a ScenarioParams,
    alpha_o: f64,
    bandwidth: f64,
    density: f64,
}

impl Problem<'_> {
    fn powers(&self, zeta: f64, w_a: f64) -> (f64, f64) {
        let eps = self.scn.access_weight();
        let p_ue = required_power(
            eps * zeta,
            w_a,
            self.scn.beta_ue(),
            self.alpha_o,
            self.density,
        );
        let p_bs = required_power(
            zeta,
            self.bandwidth - w_a,
            self.scn.beta_bs(),
            self.alpha_o,
            self.density,
        );
        (p_ue, p_bs)
    }

    /// Cheapest bandwidth split for level ζ.
    fn cheapest(&self, zeta: f64) -> Split {
        let (w_a, _) = golden_section(
            |w| {
                let (a, b) = self.powers(zeta, w);
                a + b
            },
            0.0,
            self.bandwidth,
            SPLIT_REL_TOL,
        );
        let (p_ue, p_bs) = self.powers(zeta, w_a);
        Split { w_a, p_ue, p_bs }
    }
}

/// Max-min optimal allocation when the access and backhaul bands are disjoint.
///
/// The returned allocation spends the whole power budget and the whole
/// α_1 W of spectrum. `converged` is false if the ζ bracket did not shrink to
/// tolerance within the bisection cap.
pub fn solve_orthogonal(scn: &ScenarioParams) -> Result<SolveResult> {
    if scn.overlap_flag() {
        return Err(Error::InvalidParameters(format!(
            "exact solver needs zero overlap, got {} Hz",
            scn.overlap_bandwidth()
        )));
    }
    let (alpha_o, _) = scn.duplex_factors();
    let problem = Problem {
        scn,
        alpha_o,
        bandwidth: scn.bandwidth_cap(),
        density: scn.noise_plus_interference(),
    };
    let power = scn.total_power();

    // Backhaul alone with every resource: no max-min level can exceed it.
    let upper = alpha_o
        * problem.bandwidth
        * log2_1p(power * scn.beta_bs() / (problem.density * problem.bandwidth));

    let (mut lo, mut hi) = (0.0, upper);
    let mut best = Split {
        w_a: 0.5 * problem.bandwidth,
        p_ue: 0.0,
        p_bs: 0.0,
    };
    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_BISECTIONS {
        if hi - lo <= ZETA_REL_TOL * hi {
            converged = true;
            break;
        }
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let split = problem.cheapest(mid);
        if split.p_ue + split.p_bs <= power {
            lo = mid;
            best = split;
        } else {
            hi = mid;
        }
    }

    // Hand the leftover power back proportionally so the budget is met exactly.
    let spent = best.p_ue + best.p_bs;
    let (p_ue, p_bs) = if spent > 0.0 {
        let scale = power / spent;
        (best.p_ue * scale, power - best.p_ue * scale)
    } else {
        (0.5 * power, 0.5 * power)
    };
    let allocation = Allocation::new(p_ue, p_bs, best.w_a, problem.bandwidth - best.w_a);
    let report = evaluate(scn, &allocation)?;
    Ok(SolveResult {
        allocation,
        report,
        solver: SolverKind::ExactOrthogonal,
        iterations_used: iterations,
        converged,
    })
}

fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratemodel::tests::table_scenario;
    use crate::ratemodel::{validate, DuplexMode};
    use proptest::prelude::*;

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let (x, fx) = golden_section(|x| (x - 0.3).powi(2), 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-9);
        assert!(fx < 1e-18);
    }

    #[test]
    fn rejects_overlap() {
        let scn = table_scenario(DuplexMode::Fdd, 1e6);
        assert!(matches!(
            solve_orthogonal(&scn),
            Err(Error::InvalidParameters(_))
        ));
    }

    #[test]
    fn both_targets_tight_and_budget_spent() {
        for mode in DuplexMode::ALL {
            let scn = table_scenario(mode, 0.0);
            let res = solve_orthogonal(&scn).unwrap();
            assert!(res.converged);
            let zeta = res.zeta();
            let eps = scn.access_weight();
            let r = res.report;
            assert!((r.rate_access / (eps * zeta) - 1.0).abs() < 1e-4);
            assert!((r.rate_backhaul / zeta - 1.0).abs() < 1e-4);
            let a = res.allocation;
            assert!(((a.p_ue + a.p_bs) / scn.total_power() - 1.0).abs() < 1e-6);
            assert!(((a.w_a + a.w_b) / scn.bandwidth_cap() - 1.0).abs() < 1e-12);
            assert!(validate(&scn, &a, 1e-6).is_empty());
        }
    }

    #[test]
    fn symmetric_links_split_evenly() {
        let scn = table_scenario(DuplexMode::Fdd, 0.0)
            .with_gains(1e-10, 1e-10)
            .unwrap()
            .with_access_weight(1.0)
            .unwrap();
        let res = solve_orthogonal(&scn).unwrap();
        let a = res.allocation;
        let half_w = scn.bandwidth_cap() / 2.0;
        assert!((a.w_a / half_w - 1.0).abs() < 1e-4, "{a:?}");
        assert!((a.w_b / half_w - 1.0).abs() < 1e-4);
        assert!((a.p_ue / 5.0 - 1.0).abs() < 1e-4);
        assert!((a.p_bs / 5.0 - 1.0).abs() < 1e-4);
    }

    #[test]
    fn vanishing_access_weight_gives_everything_to_backhaul() {
        let scn = table_scenario(DuplexMode::Fdd, 0.0)
            .with_access_weight(1e-9)
            .unwrap();
        let res = solve_orthogonal(&scn).unwrap();
        let (alpha_o, _) = scn.duplex_factors();
        let w = scn.bandwidth_cap();
        let single =
            alpha_o * w * log2_1p(10.0 * scn.beta_bs() / (scn.noise_plus_interference() * w));
        assert!((res.zeta() / single - 1.0).abs() < 1e-3);
        assert!(res.allocation.p_bs / 10.0 > 0.999);
        assert!(res.allocation.w_b / w > 0.999);
    }

    #[test]
    fn reported_level_matches_evaluation() {
        let scn = table_scenario(DuplexMode::Fdd, 0.0);
        let res = solve_orthogonal(&scn).unwrap();
        let again = evaluate(&scn, &res.allocation).unwrap();
        assert!((again.maxmin_level / res.zeta() - 1.0).abs() < 1e-6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn level_nondecreasing_in_power_and_bandwidth(
            mut powers in proptest::collection::vec(1.0..100.0f64, 4),
            mut widths in proptest::collection::vec(5e6..80e6f64, 4),
            mode in prop_oneof![Just(DuplexMode::Fdd), Just(DuplexMode::Tdd)],
            eps in 0.02..1.0f64,
        ) {
            let base = table_scenario(mode, 0.0).with_access_weight(eps).unwrap();
            powers.sort_by(f64::total_cmp);
            widths.sort_by(f64::total_cmp);
            let by_power: Vec<f64> = powers.iter()
                .map(|&p| solve_orthogonal(&base.with_total_power(p).unwrap()).unwrap().zeta())
                .collect();
            let by_width: Vec<f64> = widths.iter()
                .map(|&w| solve_orthogonal(&base.with_total_bandwidth(w).unwrap()).unwrap().zeta())
                .collect();
            for pair in by_power.windows(2).chain(by_width.windows(2)) {
                prop_assert!(pair[1] >= pair[0] * (1.0 - 1e-9), "{:?}", pair);
            }
        }
    }
}
