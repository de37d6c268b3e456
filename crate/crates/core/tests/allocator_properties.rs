mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use satiab::allocator::{grid_oracle, pso_solve, solve_orthogonal, PsoConfig};
use satiab::expcli::ExperimentConfig;
use satiab::ratemodel::{validate, DuplexMode};

use common::{box_grid_zeta, rel_gap, scenario};

const BETA_UE: f64 = 1.573_472_603_915_501_6e-12;
const BETA_BS: f64 = 1.358_980_595_388_935_4e-9;

#[test]
fn solvers_return_feasible_allocations() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cfg = PsoConfig {
        population_size: 10,
        max_iterations: 10,
        ..PsoConfig::default()
    };
    for i in 0..200 {
        let mode = if i % 2 == 0 {
            DuplexMode::Fdd
        } else {
            DuplexMode::Tdd
        };
        let overlap = if i % 3 == 0 {
            0.0
        } else {
            40e6 * rng.random::<f64>()
        };
        let scn = scenario(
            mode,
            rng.random_range(0.1..100.0),
            overlap,
            rng.random_range(0.05..1.0),
            BETA_UE,
            BETA_BS,
        );
        let pso = pso_solve(&scn, &cfg.with_seed(i)).unwrap();
        assert!(validate(&scn, &pso.allocation, 1e-6).is_empty());
        let grid = grid_oracle(&scn, 12).unwrap();
        assert!(validate(&scn, &grid.allocation, 1e-6).is_empty());
        if overlap == 0.0 {
            let exact = solve_orthogonal(&scn).unwrap();
            assert!(validate(&scn, &exact.allocation, 1e-6).is_empty());
            assert!(grid.zeta() <= exact.zeta() * (1.0 + 1e-9));
        }
    }
}

#[test]
fn pso_seed_spread_is_small() {
    let scn = ExperimentConfig::default().scenario.params().unwrap();
    let zetas: Vec<f64> = (0..20)
        .map(|s| {
            pso_solve(&scn, &PsoConfig::default().with_seed(s))
                .unwrap()
                .zeta()
        })
        .collect();
    let hi = zetas.iter().cloned().fold(f64::MIN, f64::max);
    let lo = zetas.iter().cloned().fold(f64::MAX, f64::min);
    assert!((hi - lo) / hi <= 0.05, "spread {lo}..{hi}");
}

#[test]
fn pso_near_box_grid_with_full_overlap() {
    let scn = scenario(DuplexMode::Fdd, 10.0, 40e6, 0.1, BETA_UE, BETA_BS);
    let reference = box_grid_zeta(&scn, 100);
    let pso = pso_solve(&scn, &PsoConfig::default()).unwrap().zeta();
    assert!(
        rel_gap(reference, pso) <= 0.02,
        "pso {pso} vs grid {reference}"
    );
}

#[test]
fn pso_near_exact_without_overlap() {
    for mode in DuplexMode::ALL {
        let scn = scenario(mode, 10.0, 0.0, 0.1, BETA_UE, BETA_BS);
        let exact = solve_orthogonal(&scn).unwrap().zeta();
        let pso = pso_solve(&scn, &PsoConfig::default()).unwrap().zeta();
        assert!(
            rel_gap(exact, pso) <= 0.02,
            "{mode}: pso {pso} vs exact {exact}"
        );
        assert!(pso <= exact * (1.0 + 1e-9));
    }
}

#[test]
fn exact_solution_is_tight() {
    for eps in [0.05, 0.1, 0.5, 1.0] {
        let scn = scenario(DuplexMode::Tdd, 100.0, 0.0, eps, BETA_UE, BETA_BS);
        let res = solve_orthogonal(&scn).unwrap();
        let z = res.zeta();
        assert!(((res.report.rate_access - eps * z) / (eps * z)).abs() <= 1e-4);
        assert!(((res.report.rate_backhaul - z) / z).abs() <= 1e-4);
        let a = res.allocation;
        assert!(((a.p_ue + a.p_bs - 100.0) / 100.0).abs() <= 1e-6);
    }
}
