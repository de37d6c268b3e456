//! Free-space channel gains between the satellite and its ground terminals.
//!
//! β = G_sat · G_node · ψ(θ) / PL, with PL = (4π f d / c)² and ψ the
//! circular-aperture pattern evaluated at the node's boresight offset.

mod bessel;
mod units;

use std::f64::consts::{FRAC_PI_2, PI};

pub use bessel::bessel_j1;
pub use units::{
    db_to_linear, dbm_to_watts, linear_to_db, watts_to_dbm, DecibelUnit, DecibelValue,
};

use crate::{Error, Result, SPEED_OF_LIGHT};

/// One ground terminal as seen from the satellite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundNodeParams {
    /// Linear power ratio.
    pub antenna_gain: f64,
    /// Offset from the satellite antenna axis, radians.
    pub boresight_angle: f64,
    /// Meters.
    pub slant_distance: f64,
}

impl GroundNodeParams {
    pub fn new(antenna_gain: f64, boresight_angle: f64, slant_distance: f64) -> Result<Self> {
        let node = Self {
            antenna_gain,
            boresight_angle,
            slant_distance,
        };
        node.check()?;
        Ok(node)
    }

    /// Terminal at `boresight_angle` below a satellite at `altitude`, with the
    /// slant range from [`slant_distance`].
    pub fn at_altitude(antenna_gain: f64, boresight_angle: f64, altitude: f64) -> Result<Self> {
        if !(altitude > 0.0 && altitude.is_finite()) {
            return Err(Error::InvalidParameters(format!(
                "altitude must be positive, got {altitude}"
            )));
        }
        check_angle(boresight_angle)?;
        Self::new(
            antenna_gain,
            boresight_angle,
            slant_distance(altitude, boresight_angle),
        )
    }

    fn check(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !(self.antenna_gain > 0.0 && self.antenna_gain.is_finite()) {
            problems.push(format!(
                "antenna gain must be positive, got {}",
                self.antenna_gain
            ));
        }
        if !(self.slant_distance > 0.0 && self.slant_distance.is_finite()) {
            problems.push(format!(
                "slant distance must be positive, got {}",
                self.slant_distance
            ));
        }
        if let Err(e) = check_angle(self.boresight_angle) {
            problems.push(e.to_string());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatelliteParams {
    /// Linear power ratio.
    pub antenna_gain: f64,
    /// Radius of the circular antenna aperture, meters.
    pub aperture_radius: f64,
    /// Hz.
    pub carrier_frequency: f64,
    /// Meters above ground.
    pub altitude: f64,
}

impl SatelliteParams {
    pub fn new(
        antenna_gain: f64,
        aperture_radius: f64,
        carrier_frequency: f64,
        altitude: f64,
    ) -> Result<Self> {
        let fields = [
            ("antenna gain", antenna_gain),
            ("aperture radius", aperture_radius),
            ("carrier frequency", carrier_frequency),
            ("altitude", altitude),
        ];
        let problems: Vec<String> = fields
            .iter()
            .filter(|(_, v)| !(*v > 0.0 && v.is_finite()))
            .map(|(name, v)| format!("satellite {name} must be positive, got {v}"))
            .collect();
        if !problems.is_empty() {
            return Err(Error::Validation(problems));
        }
        Ok(Self {
            antenna_gain,
            aperture_radius,
            carrier_frequency,
            altitude,
        })
    }

    /// Wavenumber k = 2π f / c, rad/m.
    pub fn wavenumber(&self) -> f64 {
        wavenumber(self.carrier_frequency)
    }
}

fn check_angle(theta: f64) -> Result<()> {
    if theta.is_finite() && theta.abs() < FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::InvalidParameters(format!(
            "boresight angle must lie in (-pi/2, pi/2), got {theta}"
        )))
    }
}

fn wavenumber(carrier_frequency: f64) -> f64 {
    2.0 * PI * carrier_frequency / SPEED_OF_LIGHT
}

/// Normalized satellite antenna pattern ψ(θ).
///
/// Exactly 1 on boresight, |J₁(u)/u| with u = k·a·sin θ elsewhere. The
/// off-axis branch tends to 0.5 as θ → 0, so the pattern is deliberately
/// discontinuous at the origin.
pub fn antenna_pattern(theta: f64, aperture_radius: f64, carrier_frequency: f64) -> f64 {
    if theta == 0.0 {
        return 1.0;
    }
    let u = wavenumber(carrier_frequency) * aperture_radius * theta.sin();
    (bessel_j1(u) / u).abs()
}

/// Free-space path loss (4π f d / c)² as a linear power ratio (≥ 1 at range).
pub fn free_space_path_loss(carrier_frequency: f64, distance: f64) -> f64 {
    let r = 4.0 * PI * carrier_frequency * distance / SPEED_OF_LIGHT;
    r * r
}

/// altitude / cos θ: flat-earth slant range for a terminal at boresight offset θ.
pub fn slant_distance(altitude: f64, boresight_angle: f64) -> f64 {
    altitude / boresight_angle.cos()
}

/// Linear channel power gain β between the satellite and `node`.
pub fn channel_gain(sat: &SatelliteParams, node: &GroundNodeParams) -> f64 {
    let pattern = antenna_pattern(
        node.boresight_angle,
        sat.aperture_radius,
        sat.carrier_frequency,
    );
    let loss = free_space_path_loss(sat.carrier_frequency, node.slant_distance);
    sat.antenna_gain * node.antenna_gain * pattern / loss
}
