//! JSON experiment configuration.
//!
//! Keys are snake_case with the unit as suffix. Every key is optional and
//! falls back to the reference scenario (40 MHz at 2 GHz, 40 dBm, 600 km, ...).
//! Decibel quantities are converted to linear SI units once, on load.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::allocator::{PsoConfig, SolverKind};
use crate::linkbudget::{
    channel_gain, db_to_linear, dbm_to_watts, GroundNodeParams, SatelliteParams,
};
use crate::ratemodel::{DuplexMode, ScenarioInputs, ScenarioParams};
use crate::{Error, Result};

/// Which sweep a config asks for by default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SweepKind {
    #[default]
    None,
    Power {
        min_dbm: f64,
        max_dbm: f64,
        step_db: f64,
    },
    Overlap {
        points: usize,
    },
}

/// The config file as written, in its own units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigDocument {
    pub total_bandwidth_mhz: f64,
    pub total_power_dbm: f64,
    pub noise_density_dbm_hz: f64,
    pub interference_density_dbm_hz: f64,
    pub satellite_antenna_gain_dbi: f64,
    pub bs_antenna_gain_dbi: f64,
    pub ue_antenna_gain_dbi: f64,
    pub carrier_frequency_ghz: f64,
    pub aperture_radius_m: f64,
    pub altitude_km: f64,
    pub ue_boresight_deg: f64,
    pub bs_boresight_deg: f64,
    pub overlap_mhz: f64,
    pub access_weight: f64,
    pub duplex: DuplexMode,
    pub pso_population_size: usize,
    pub pso_max_iterations: usize,
    pub pso_inertia_weight: f64,
    pub pso_learning_factor_1: f64,
    pub pso_learning_factor_2: f64,
    pub pso_ring_includes_self: bool,
    pub seed: u64,
    pub oracle_resolution: usize,
    pub sweep: SweepKind,
    pub sweep_altitudes_km: Vec<f64>,
    pub sweep_access_weights: Vec<f64>,
    pub solvers: Vec<SolverKind>,
    pub output_path: PathBuf,
}

impl Default for ConfigDocument {
    fn default() -> Self {
        let pso = PsoConfig::default();
        Self {
            total_bandwidth_mhz: 40.0,
            total_power_dbm: 40.0,
            noise_density_dbm_hz: -174.0,
            interference_density_dbm_hz: -174.0,
            satellite_antenna_gain_dbi: 36.0,
            bs_antenna_gain_dbi: 32.8,
            ue_antenna_gain_dbi: 0.0,
            carrier_frequency_ghz: 2.0,
            aperture_radius_m: 1.5,
            altitude_km: 600.0,
            ue_boresight_deg: 0.0,
            bs_boresight_deg: 0.8,
            overlap_mhz: 0.0,
            access_weight: 0.1,
            duplex: DuplexMode::Fdd,
            pso_population_size: pso.population_size,
            pso_max_iterations: pso.max_iterations,
            pso_inertia_weight: pso.inertia_weight,
            pso_learning_factor_1: pso.learning_factor_1,
            pso_learning_factor_2: pso.learning_factor_2,
            pso_ring_includes_self: pso.ring_includes_self,
            seed: pso.rng_seed,
            oracle_resolution: 200,
            sweep: SweepKind::None,
            sweep_altitudes_km: vec![600.0, 1200.0],
            sweep_access_weights: vec![0.05, 0.1, 0.2],
            solvers: vec![SolverKind::ExactOrthogonal, SolverKind::Pso],
            output_path: PathBuf::from("out"),
        }
    }
}

/// Physical scenario in linear SI units, before channel gains are computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioConfig {
    /// W.
    pub total_power: f64,
    /// Hz.
    pub total_bandwidth: f64,
    /// Hz.
    pub overlap_bandwidth: f64,
    /// W/Hz.
    pub noise_density: f64,
    /// W/Hz.
    pub interference_density: f64,
    /// Satellite antenna, carrier and altitude.
    pub satellite: SatelliteParams,
    pub ue_antenna_gain: f64,
    /// Radians.
    pub ue_boresight: f64,
    pub bs_antenna_gain: f64,
    /// Radians.
    pub bs_boresight: f64,
    pub access_weight: f64,
    pub duplex: DuplexMode,
}

impl ScenarioConfig {
    /// Channel gains at the configured altitude, bundled into rate-model parameters.
    pub fn params(&self) -> Result<ScenarioParams> {
        let altitude = self.satellite.altitude;
        let ue = GroundNodeParams::at_altitude(self.ue_antenna_gain, self.ue_boresight, altitude)?;
        let bs = GroundNodeParams::at_altitude(self.bs_antenna_gain, self.bs_boresight, altitude)?;
        ScenarioParams::new(ScenarioInputs {
            total_power: self.total_power,
            total_bandwidth: self.total_bandwidth,
            overlap_bandwidth: self.overlap_bandwidth,
            noise_density: self.noise_density,
            interference_density: self.interference_density,
            access_weight: self.access_weight,
            duplex: self.duplex,
            beta_ue: channel_gain(&self.satellite, &ue),
            beta_bs: channel_gain(&self.satellite, &bs),
            overlap_flag: None,
        })
    }

    pub fn at_altitude(mut self, meters: f64) -> Self {
        self.satellite.altitude = meters;
        self
    }

    pub fn with_power_dbm(mut self, dbm: f64) -> Self {
        self.total_power = dbm_to_watts(dbm);
        self
    }

    /// Overlap as a fraction of the total bandwidth.
    pub fn with_overlap_fraction(mut self, fraction: f64) -> Self {
        self.overlap_bandwidth = fraction * self.total_bandwidth;
        self
    }

    pub fn with_access_weight(mut self, eps: f64) -> Self {
        self.access_weight = eps;
        self
    }

    pub fn with_duplex(mut self, mode: DuplexMode) -> Self {
        self.duplex = mode;
        self
    }
}

/// A loaded, validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: ScenarioConfig,
    pub pso: PsoConfig,
    pub sweep: SweepKind,
    pub solvers: Vec<SolverKind>,
    pub oracle_resolution: usize,
    /// Meters.
    pub sweep_altitudes: Vec<f64>,
    pub sweep_access_weights: Vec<f64>,
    pub output_path: PathBuf,
    document: ConfigDocument,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::from_document(ConfigDocument::default()).expect("built-in defaults are valid")
    }
}

impl ExperimentConfig {
    pub fn from_document(doc: ConfigDocument) -> Result<Self> {
        let mut problems = Vec::new();

        let satellite = SatelliteParams::new(
            db_to_linear(doc.satellite_antenna_gain_dbi),
            doc.aperture_radius_m,
            doc.carrier_frequency_ghz * 1e9,
            doc.altitude_km * 1e3,
        );
        let satellite = match satellite {
            Ok(s) => Some(s),
            Err(e) => {
                collect(&mut problems, e);
                None
            }
        };

        let rates = ScenarioParams::new(ScenarioInputs {
            total_power: dbm_to_watts(doc.total_power_dbm),
            total_bandwidth: doc.total_bandwidth_mhz * 1e6,
            overlap_bandwidth: doc.overlap_mhz * 1e6,
            noise_density: dbm_to_watts(doc.noise_density_dbm_hz),
            interference_density: dbm_to_watts(doc.interference_density_dbm_hz),
            access_weight: doc.access_weight,
            duplex: doc.duplex,
            // gains are checked separately, with the geometry
            beta_ue: 1.0,
            beta_bs: 1.0,
            overlap_flag: None,
        });
        if let Err(e) = rates {
            collect(&mut problems, e);
        }

        let scenario = satellite.map(|satellite| ScenarioConfig {
            total_power: dbm_to_watts(doc.total_power_dbm),
            total_bandwidth: doc.total_bandwidth_mhz * 1e6,
            overlap_bandwidth: doc.overlap_mhz * 1e6,
            noise_density: dbm_to_watts(doc.noise_density_dbm_hz),
            interference_density: dbm_to_watts(doc.interference_density_dbm_hz),
            satellite,
            ue_antenna_gain: db_to_linear(doc.ue_antenna_gain_dbi),
            ue_boresight: doc.ue_boresight_deg.to_radians(),
            bs_antenna_gain: db_to_linear(doc.bs_antenna_gain_dbi),
            bs_boresight: doc.bs_boresight_deg.to_radians(),
            access_weight: doc.access_weight,
            duplex: doc.duplex,
        });
        if let Some(sat) = satellite {
            for (name, gain, angle) in [
                (
                    "ue",
                    db_to_linear(doc.ue_antenna_gain_dbi),
                    doc.ue_boresight_deg.to_radians(),
                ),
                (
                    "bs",
                    db_to_linear(doc.bs_antenna_gain_dbi),
                    doc.bs_boresight_deg.to_radians(),
                ),
            ] {
                if let Err(e) = GroundNodeParams::at_altitude(gain, angle, sat.altitude) {
                    problems.push(format!("{name} terminal: {e}"));
                }
            }
        }
        // Channel gains can still underflow for extreme geometry.
        if problems.is_empty() {
            if let Some(Err(e)) = scenario.as_ref().map(ScenarioConfig::params) {
                collect(&mut problems, e);
            }
        }

        let pso = PsoConfig {
            population_size: doc.pso_population_size,
            max_iterations: doc.pso_max_iterations,
            learning_factor_1: doc.pso_learning_factor_1,
            learning_factor_2: doc.pso_learning_factor_2,
            inertia_weight: doc.pso_inertia_weight,
            rng_seed: doc.seed,
            ring_includes_self: doc.pso_ring_includes_self,
        };
        if let Err(e) = pso.validate() {
            collect(&mut problems, e);
        }

        match doc.sweep {
            SweepKind::None => {}
            SweepKind::Power {
                min_dbm,
                max_dbm,
                step_db,
            } => {
                if !(min_dbm.is_finite() && max_dbm.is_finite() && min_dbm <= max_dbm) {
                    problems.push(format!(
                        "power sweep range [{min_dbm}, {max_dbm}] dBm is empty"
                    ));
                }
                if !(step_db > 0.0 && step_db.is_finite()) {
                    problems.push(format!("power sweep step must be positive, got {step_db}"));
                }
            }
            SweepKind::Overlap { points } => {
                if points < 2 {
                    problems.push(format!(
                        "overlap sweep needs at least 2 points, got {points}"
                    ));
                }
            }
        }

        if doc.solvers.is_empty() {
            problems.push("at least one solver must be selected".to_string());
        }
        if doc.solvers.contains(&SolverKind::ExactOrthogonal) && doc.overlap_mhz != 0.0 {
            problems.push(format!(
                "exact solver needs overlap_mhz = 0, got {}",
                doc.overlap_mhz
            ));
        }
        if doc.oracle_resolution < 10 {
            problems.push(format!(
                "oracle_resolution must be at least 10, got {}",
                doc.oracle_resolution
            ));
        }
        if doc.sweep_altitudes_km.is_empty()
            || doc
                .sweep_altitudes_km
                .iter()
                .any(|h| !(*h > 0.0 && h.is_finite()))
        {
            problems.push("sweep_altitudes_km must be a nonempty list of positive values".into());
        }
        if doc.sweep_access_weights.is_empty()
            || doc
                .sweep_access_weights
                .iter()
                .any(|e| !(*e > 0.0 && *e <= 1.0))
        {
            problems.push("sweep_access_weights must be a nonempty list in (0, 1]".into());
        }

        if !problems.is_empty() {
            return Err(Error::Validation(problems));
        }
        let mut solvers = doc.solvers.clone();
        solvers.sort();
        solvers.dedup();
        Ok(Self {
            scenario: scenario.expect("checked above"),
            pso,
            sweep: doc.sweep,
            solvers,
            oracle_resolution: doc.oracle_resolution,
            sweep_altitudes: doc.sweep_altitudes_km.iter().map(|h| h * 1e3).collect(),
            sweep_access_weights: doc.sweep_access_weights.clone(),
            output_path: doc.output_path.clone(),
            document: doc,
        })
    }

    pub fn document(&self) -> &ConfigDocument {
        &self.document
    }

    /// Replaces the PSO seed, keeping the document in sync.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.pso.rng_seed = seed;
        self.document.seed = seed;
        self
    }

    pub fn with_solvers(self, solvers: Vec<SolverKind>) -> Result<Self> {
        let mut doc = self.document;
        doc.solvers = solvers;
        Self::from_document(doc)
    }

    pub fn with_output_path(mut self, path: impl Into<PathBuf>) -> Self {
        let path = path.into();
        self.output_path = path.clone();
        self.document.output_path = path;
        self
    }

    pub fn uses(&self, solver: SolverKind) -> bool {
        self.solvers.contains(&solver)
    }
}

fn collect(problems: &mut Vec<String>, e: Error) {
    match e {
        Error::Validation(list) => problems.extend(list),
        other => problems.push(other.to_string()),
    }
}

/// Parses and validates a config from JSON text. `source_name` labels errors.
pub fn parse_config(text: &str, source_name: &str) -> Result<ExperimentConfig> {
    let mut de = serde_json::Deserializer::from_str(text);
    let doc: ConfigDocument = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let message = if path == "." || path.is_empty() {
            inner.to_string()
        } else {
            format!("key `{path}`: {inner}")
        };
        Error::Parse {
            source_name: source_name.to_string(),
            line: inner.line(),
            column: inner.column(),
            message,
        }
    })?;
    de.end().map_err(|e| Error::Parse {
        source_name: source_name.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    ExperimentConfig::from_document(doc)
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text, &path.display().to_string())
}

/// Pretty JSON for `cfg`, readable back by [`parse_config`] into an equal config.
pub fn config_to_json(cfg: &ExperimentConfig) -> String {
    serde_json::to_string_pretty(cfg.document()).expect("config document serializes")
}

pub fn write_config(cfg: &ExperimentConfig, path: &Path) -> Result<()> {
    let mut text = config_to_json(cfg);
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
