//! Reference implementations used only by the integration tests. None of
//! them share code paths with the library routines they check.

#![allow(dead_code)]

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};

use satiab::ratemodel::{evaluate, Allocation, DuplexMode, ScenarioInputs, ScenarioParams};

const FRAC_BITS: usize = 320;

/// J₁(x) from Σ (−1)^m (x/2)^(2m+1) / (m!(m+1)!) in 320-bit fixed point,
/// rounded to f64 once at the end. Summation stops when a term vanishes.
pub fn bessel_j1_exact(x: f64, max_terms: usize) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let half = to_fixed(x) >> 1usize;
    let half_sq = (&half * &half) >> FRAC_BITS;
    let mut term = half.clone();
    let mut sum = half;
    for m in 0..max_terms {
        let denom = BigInt::from((m + 1) * (m + 2));
        term = -((&term * &half_sq) >> FRAC_BITS) / denom;
        if term.is_zero() {
            break;
        }
        sum += &term;
    }
    BigRational::new(sum, BigInt::one() << FRAC_BITS)
        .to_f64()
        .expect("representable")
}

fn to_fixed(x: f64) -> BigInt {
    let bits = x.abs().to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mantissa, exp) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let shift = exp + FRAC_BITS as i64;
    assert!(shift >= 0, "argument too small for the fixed-point oracle");
    let v = BigInt::from(mantissa) << shift as usize;
    if x < 0.0 {
        -v
    } else {
        v
    }
}

pub fn rel_gap(reference: f64, value: f64) -> f64 {
    (reference - value) / reference
}

/// -174 dBm/Hz in W/Hz.
pub const N0: f64 = 3.981_071_705_534_972e-21;

pub fn scenario(
    mode: DuplexMode,
    power: f64,
    overlap: f64,
    eps: f64,
    beta_ue: f64,
    beta_bs: f64,
) -> ScenarioParams {
    ScenarioParams::new(ScenarioInputs {
        total_power: power,
        total_bandwidth: 40e6,
        overlap_bandwidth: overlap,
        noise_density: N0,
        interference_density: N0,
        access_weight: eps,
        duplex: mode,
        beta_ue,
        beta_bs,
        overlap_flag: None,
    })
    .unwrap()
}

/// Best ζ over a uniform box grid of (P_UE, W_A, W_B) with P_BS = P − P_UE.
/// Points outside the feasible bandwidth region are skipped.
pub fn box_grid_zeta(scn: &ScenarioParams, per_axis: usize) -> f64 {
    let (_, a1) = match scn.duplex() {
        DuplexMode::Fdd => (1.0, 0.5),
        DuplexMode::Tdd => (0.5, 1.0),
    };
    let w = scn.total_bandwidth();
    let wo = scn.overlap_bandwidth();
    let lo = a1 * wo;
    let hi = a1 * w;
    let budget = a1 * (w + wo);
    let p = scn.total_power();
    let n = per_axis as f64;
    let mut best = 0.0f64;
    for i in 0..=per_axis {
        let p_ue = p * i as f64 / n;
        for j in 0..=per_axis {
            let w_a = lo + (hi - lo) * j as f64 / n;
            for k in 0..=per_axis {
                let w_b = lo + (hi - lo) * k as f64 / n;
                if w_a + w_b > budget * (1.0 + 1e-12) {
                    continue;
                }
                if let Ok(r) = evaluate(scn, &Allocation::new(p_ue, p - p_ue, w_a, w_b)) {
                    best = best.max(r.maxmin_level);
                }
            }
        }
    }
    best
}

pub fn is_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}
