//! Decibel conversions. Everything downstream works in linear SI units.

use std::fmt;

/// 10^(x/10).
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// 10·log10(x).
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    linear_to_db(watts) + 30.0
}

/// What a decibel figure is relative to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecibelUnit {
    /// Plain power ratio.
    Db,
    /// Relative to 1 mW. Linear value is in watts.
    Dbm,
    /// Antenna gain relative to isotropic.
    Dbi,
    /// Power spectral density relative to 1 mW/Hz. Linear value is in W/Hz.
    DbmPerHz,
}

/// A finite logarithmic quantity tagged with its reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecibelValue {
    value: f64,
    unit: DecibelUnit,
}

impl DecibelValue {
    pub fn new(value: f64, unit: DecibelUnit) -> Option<Self> {
        value.is_finite().then_some(Self { value, unit })
    }

    pub fn db(value: f64) -> Option<Self> {
        Self::new(value, DecibelUnit::Db)
    }

    pub fn dbm(value: f64) -> Option<Self> {
        Self::new(value, DecibelUnit::Dbm)
    }

    pub fn dbi(value: f64) -> Option<Self> {
        Self::new(value, DecibelUnit::Dbi)
    }

    pub fn dbm_per_hz(value: f64) -> Option<Self> {
        Self::new(value, DecibelUnit::DbmPerHz)
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn unit(&self) -> DecibelUnit {
        self.unit
    }

    /// Linear value in SI units (ratio, W, or W/Hz).
    pub fn to_linear(&self) -> f64 {
        match self.unit {
            DecibelUnit::Db | DecibelUnit::Dbi => db_to_linear(self.value),
            DecibelUnit::Dbm | DecibelUnit::DbmPerHz => dbm_to_watts(self.value),
        }
    }

    /// Inverse of [`DecibelValue::to_linear`]. `None` unless `linear` is positive and finite.
    pub fn from_linear(linear: f64, unit: DecibelUnit) -> Option<Self> {
        if !(linear > 0.0 && linear.is_finite()) {
            return None;
        }
        let value = match unit {
            DecibelUnit::Db | DecibelUnit::Dbi => linear_to_db(linear),
            DecibelUnit::Dbm | DecibelUnit::DbmPerHz => watts_to_dbm(linear),
        };
        Self::new(value, unit)
    }
}

impl fmt::Display for DecibelValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let suffix = match self.unit {
            DecibelUnit::Db => "dB",
            DecibelUnit::Dbm => "dBm",
            DecibelUnit::Dbi => "dBi",
            DecibelUnit::DbmPerHz => "dBm/Hz",
        };
        write!(f, "{} {}", self.value, suffix)
    }
}
