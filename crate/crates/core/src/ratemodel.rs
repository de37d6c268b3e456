//! Achievable access/backhaul rates for a given power and bandwidth split.
//!
//! Both links are Shannon rates over their own bandwidth. When the two
//! allocations overlap in frequency (w_o > 0) each link sees the other's
//! transmission as interference spread over the overlap:
//!
//! ```text
//! R_A = α_o W_A log2(1 + P_UE β_UE / ((σn² + σq²) W_A + α_1 P_BS β_UE w_o / W_B))
//! R_B = α_o W_B log2(1 + P_BS β_BS / ((σn² + σq²) W_B + α_1 P_UE β_BS w_o / W_A))
//! ```

use std::f64::consts::LN_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DuplexMode {
    #[serde(rename = "FDD")]
    Fdd,
    #[serde(rename = "TDD")]
    Tdd,
}

impl DuplexMode {
    pub const ALL: [DuplexMode; 2] = [DuplexMode::Fdd, DuplexMode::Tdd];

    pub fn as_str(&self) -> &'static str {
        match self {
            DuplexMode::Fdd => "FDD",
            DuplexMode::Tdd => "TDD",
        }
    }
}

impl fmt::Display for DuplexMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for DuplexMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "FDD" => Ok(DuplexMode::Fdd),
            "TDD" => Ok(DuplexMode::Tdd),
            _ => Err(Error::InvalidParameters(format!(
                "unknown duplex mode {s:?}, expected FDD or TDD"
            ))),
        }
    }
}

/// (α_o, α_1) for a duplex mode.
///
/// α_o scales the time share a link gets, α_1 the share of spectrum it may
/// draw from. FDD: (1, ½). TDD: (½, 1).
pub fn duplex_factors(mode: DuplexMode) -> (f64, f64) {
    match mode {
        DuplexMode::Fdd => (1.0, 0.5),
        DuplexMode::Tdd => (0.5, 1.0),
    }
}

/// Raw scenario fields, checked by [`ScenarioParams::new`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioInputs {
    /// W.
    pub total_power: f64,
    /// Hz.
    pub total_bandwidth: f64,
    /// Hz. Zero for orthogonal access/backhaul bands.
    pub overlap_bandwidth: f64,
    /// W/Hz.
    pub noise_density: f64,
    /// W/Hz.
    pub interference_density: f64,
    /// Weight of the access QoS target relative to backhaul.
    pub access_weight: f64,
    pub duplex: DuplexMode,
    pub beta_ue: f64,
    pub beta_bs: f64,
    /// Explicit overlap indicator. Leave `None` to derive it from
    /// `overlap_bandwidth`; a value that disagrees with it is rejected.
    pub overlap_flag: Option<bool>,
}

/// A validated scenario. The overlap indicator is always `overlap_bandwidth > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioParams {
    inputs: ScenarioInputs,
}

impl ScenarioParams {
    pub fn new(mut inputs: ScenarioInputs) -> Result<Self> {
        let mut problems = Vec::new();
        let positive = [
            ("total power", inputs.total_power),
            ("total bandwidth", inputs.total_bandwidth),
            ("noise density", inputs.noise_density),
            ("interference density", inputs.interference_density),
            ("beta_ue", inputs.beta_ue),
            ("beta_bs", inputs.beta_bs),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                problems.push(format!("{name} must be positive and finite, got {v}"));
            }
        }
        let w_o = inputs.overlap_bandwidth;
        if !(w_o >= 0.0 && w_o <= inputs.total_bandwidth) {
            problems.push(format!(
                "overlap bandwidth {w_o} Hz must lie in [0, {}] Hz",
                inputs.total_bandwidth
            ));
        }
        let eps = inputs.access_weight;
        if !(eps > 0.0 && eps <= 1.0) {
            problems.push(format!("access weight must lie in (0, 1], got {eps}"));
        }
        let derived = w_o > 0.0;
        match inputs.overlap_flag {
            Some(flag) if flag != derived => problems.push(format!(
                "overlap flag {} inconsistent with overlap bandwidth {w_o} Hz",
                u8::from(flag)
            )),
            _ => {}
        }
        if !problems.is_empty() {
            return Err(Error::Validation(problems));
        }
        inputs.overlap_flag = Some(derived);
        Ok(Self { inputs })
    }

    pub fn inputs(&self) -> ScenarioInputs {
        self.inputs
    }

    pub fn total_power(&self) -> f64 {
        self.inputs.total_power
    }

    pub fn total_bandwidth(&self) -> f64 {
        self.inputs.total_bandwidth
    }

    pub fn overlap_bandwidth(&self) -> f64 {
        self.inputs.overlap_bandwidth
    }

    pub fn noise_density(&self) -> f64 {
        self.inputs.noise_density
    }

    pub fn interference_density(&self) -> f64 {
        self.inputs.interference_density
    }

    pub fn access_weight(&self) -> f64 {
        self.inputs.access_weight
    }

    pub fn duplex(&self) -> DuplexMode {
        self.inputs.duplex
    }

    pub fn beta_ue(&self) -> f64 {
        self.inputs.beta_ue
    }

    pub fn beta_bs(&self) -> f64 {
        self.inputs.beta_bs
    }

    /// ϖ: true iff the access and backhaul bands overlap.
    pub fn overlap_flag(&self) -> bool {
        self.inputs.overlap_bandwidth > 0.0
    }

    /// σn² + σq², W/Hz.
    pub fn noise_plus_interference(&self) -> f64 {
        self.inputs.noise_density + self.inputs.interference_density
    }

    pub fn duplex_factors(&self) -> (f64, f64) {
        duplex_factors(self.inputs.duplex)
    }

    /// α_1 (W + w_o): the most spectrum both links may occupy together.
    pub fn bandwidth_budget(&self) -> f64 {
        let (_, a1) = self.duplex_factors();
        a1 * (self.inputs.total_bandwidth + self.inputs.overlap_bandwidth)
    }

    /// α_1 W: the most spectrum one link may occupy.
    pub fn bandwidth_cap(&self) -> f64 {
        let (_, a1) = self.duplex_factors();
        a1 * self.inputs.total_bandwidth
    }

    /// α_1 w_o: the least spectrum one link may occupy.
    pub fn bandwidth_floor(&self) -> f64 {
        let (_, a1) = self.duplex_factors();
        a1 * self.inputs.overlap_bandwidth
    }

    fn modified(&self, edit: impl FnOnce(&mut ScenarioInputs)) -> Result<Self> {
        let mut inputs = self.inputs;
        inputs.overlap_flag = None;
        edit(&mut inputs);
        Self::new(inputs)
    }

    pub fn with_total_power(&self, watts: f64) -> Result<Self> {
        self.modified(|i| i.total_power = watts)
    }

    pub fn with_total_bandwidth(&self, hz: f64) -> Result<Self> {
        self.modified(|i| i.total_bandwidth = hz)
    }

    pub fn with_overlap(&self, hz: f64) -> Result<Self> {
        self.modified(|i| i.overlap_bandwidth = hz)
    }

    pub fn with_access_weight(&self, eps: f64) -> Result<Self> {
        self.modified(|i| i.access_weight = eps)
    }

    pub fn with_duplex(&self, mode: DuplexMode) -> Result<Self> {
        self.modified(|i| i.duplex = mode)
    }

    pub fn with_gains(&self, beta_ue: f64, beta_bs: f64) -> Result<Self> {
        self.modified(|i| {
            i.beta_ue = beta_ue;
            i.beta_bs = beta_bs;
        })
    }
}

/// Decision variables: powers in W, bandwidths in Hz.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Allocation {
    pub p_ue: f64,
    pub p_bs: f64,
    pub w_a: f64,
    pub w_b: f64,
}

impl Allocation {
    pub fn new(p_ue: f64, p_bs: f64, w_a: f64, w_b: f64) -> Self {
        Self {
            p_ue,
            p_bs,
            w_a,
            w_b,
        }
    }

    /// `[P_UE, P_BS, W_A, W_B]`, the particle layout used by the swarm.
    pub fn to_array(&self) -> [f64; 4] {
        [self.p_ue, self.p_bs, self.w_a, self.w_b]
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RateReport {
    /// R_A, bits/s.
    pub rate_access: f64,
    /// R_B, bits/s.
    pub rate_backhaul: f64,
    /// R_A + R_B.
    pub throughput: f64,
    /// ζ = min{R_A/ε, R_B}.
    pub maxmin_level: f64,
    /// λ = min{R_A, ε R_B} = ε ζ.
    pub fitness: f64,
}

/// Constraints of the allocation problem that [`validate`] can flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// Powers must be nonnegative.
    PowerNonNegative,
    /// (1a) P_UE + P_BS ≤ P.
    PowerBudget,
    /// (1b) W_A + W_B ≤ α_1 (W + w_o).
    BandwidthBudget,
    /// (1c) W_i ≤ α_1 W.
    BandwidthCap,
    /// (1d) W_i ≥ α_1 w_o.
    BandwidthFloor,
}

impl Constraint {
    pub fn id(&self) -> &'static str {
        match self {
            Constraint::PowerNonNegative => "p>=0",
            Constraint::PowerBudget => "1a",
            Constraint::BandwidthBudget => "1b",
            Constraint::BandwidthCap => "1c",
            Constraint::BandwidthFloor => "1d",
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

fn check_allocation(alloc: &Allocation) -> Result<()> {
    let values = alloc.to_array();
    if values.iter().all(|v| v.is_finite() && *v >= 0.0) {
        Ok(())
    } else {
        Err(Error::InvalidAllocation(format!(
            "powers and bandwidths must be finite and nonnegative, got {alloc:?}"
        )))
    }
}

/// Rate of one link. `other_*` belong to the link whose overlap interferes.
#[allow(clippy::too_many_arguments)]
fn link_rate(
    scn: &ScenarioParams,
    factors: (f64, f64),
    power: f64,
    bandwidth: f64,
    beta: f64,
    other_power: f64,
    other_bandwidth: f64,
    link: &str,
) -> Result<f64> {
    let (alpha_o, alpha_1) = factors;
    let interference = if scn.overlap_flag() {
        if other_bandwidth <= 0.0 {
            return Err(Error::InvalidAllocation(format!(
                "{link} interference term needs a positive bandwidth on the other link"
            )));
        }
        alpha_1 * other_power * beta * scn.overlap_bandwidth() / other_bandwidth
    } else {
        0.0
    };
    // x log(1 + c/x) -> 0 as x -> 0
    if bandwidth == 0.0 {
        return Ok(0.0);
    }
    let sinr = power * beta / (scn.noise_plus_interference() * bandwidth + interference);
    Ok(alpha_o * bandwidth * sinr.ln_1p() / LN_2)
}

fn access_rate_with(scn: &ScenarioParams, alloc: &Allocation, factors: (f64, f64)) -> Result<f64> {
    link_rate(
        scn,
        factors,
        alloc.p_ue,
        alloc.w_a,
        scn.beta_ue(),
        alloc.p_bs,
        alloc.w_b,
        "access",
    )
}

fn backhaul_rate_with(
    scn: &ScenarioParams,
    alloc: &Allocation,
    factors: (f64, f64),
) -> Result<f64> {
    link_rate(
        scn,
        factors,
        alloc.p_bs,
        alloc.w_b,
        scn.beta_bs(),
        alloc.p_ue,
        alloc.w_a,
        "backhaul",
    )
}

/// Access (satellite to UE) rate R_A in bits/s.
pub fn access_rate(scn: &ScenarioParams, alloc: &Allocation) -> Result<f64> {
    check_allocation(alloc)?;
    access_rate_with(scn, alloc, scn.duplex_factors())
}

/// Backhaul (satellite to BS) rate R_B in bits/s.
pub fn backhaul_rate(scn: &ScenarioParams, alloc: &Allocation) -> Result<f64> {
    check_allocation(alloc)?;
    backhaul_rate_with(scn, alloc, scn.duplex_factors())
}

/// Both rates plus the derived throughput, max-min level and swarm fitness.
pub fn evaluate(scn: &ScenarioParams, alloc: &Allocation) -> Result<RateReport> {
    check_allocation(alloc)?;
    let factors = scn.duplex_factors();
    let rate_access = access_rate_with(scn, alloc, factors)?;
    let rate_backhaul = backhaul_rate_with(scn, alloc, factors)?;
    Ok(report_from_rates(
        scn.access_weight(),
        rate_access,
        rate_backhaul,
    ))
}

pub(crate) fn report_from_rates(eps: f64, rate_access: f64, rate_backhaul: f64) -> RateReport {
    RateReport {
        rate_access,
        rate_backhaul,
        throughput: rate_access + rate_backhaul,
        maxmin_level: (rate_access / eps).min(rate_backhaul),
        fitness: rate_access.min(eps * rate_backhaul),
    }
}

/// Constraints violated by `alloc`, each checked with relative slack `tol`
/// against its own budget. Empty when feasible.
pub fn validate(scn: &ScenarioParams, alloc: &Allocation, tol: f64) -> Vec<Constraint> {
    let mut violated = Vec::new();
    let power = scn.total_power();
    let cap = scn.bandwidth_cap();
    let floor = scn.bandwidth_floor();
    let budget = scn.bandwidth_budget();

    // NaN compares false everywhere, so every check is written to fail on it.
    let nonneg = |v: f64| v >= -tol * power;
    if !(nonneg(alloc.p_ue) && nonneg(alloc.p_bs)) {
        violated.push(Constraint::PowerNonNegative);
    }
    if !at_most(alloc.p_ue + alloc.p_bs, power * (1.0 + tol)) {
        violated.push(Constraint::PowerBudget);
    }
    if !at_most(alloc.w_a + alloc.w_b, budget * (1.0 + tol)) {
        violated.push(Constraint::BandwidthBudget);
    }
    if !(alloc.w_a <= cap * (1.0 + tol) && alloc.w_b <= cap * (1.0 + tol)) {
        violated.push(Constraint::BandwidthCap);
    }
    let lowest = floor - tol * cap;
    if !(alloc.w_a >= lowest && alloc.w_b >= lowest) {
        violated.push(Constraint::BandwidthFloor);
    }
    violated
}

fn at_most(value: f64, limit: f64) -> bool {
    value <= limit
}
