use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::{Correlation, FiberSpec};
use crate::propagation::{Placement, ScheduleSpec, Scheme};

/// Everything needed to run one experiment reproducibly.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub fiber: FiberSpec,
    pub schedule: ScheduleSpec,
    pub l_values: Vec<i32>,
    /// Superposition phase of the input state.
    pub phi: f64,
    pub trials: usize,
    pub master_seed: u64,
    /// Number of equally spaced distances `L/P, 2L/P, ..., L` recorded.
    pub sample_points: usize,
}

/// On-disk layout: a flat TOML table holding exactly these keys.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    length_m: f64,
    segments: usize,
    sigma: f64,
    mean_phase: f64,
    correlation: Correlation,
    anchor_count: usize,
    scheme: Scheme,
    pulse_count: usize,
    #[serde(default)]
    placement: Placement,
    l_values: Vec<i32>,
    phi: f64,
    trials: usize,
    master_seed: u64,
    sample_points: usize,
}

fn field_error(field: &str, reason: impl Into<String>) -> Error {
    Error::InvalidConfig {
        field: field.to_string(),
        reason: reason.into(),
    }
}

impl ExperimentConfig {
    /// Checks every field and names the first offending one.
    pub fn validate(&self) -> Result<()> {
        let rename = |e: Error| match e {
            Error::InvalidArgument { name, reason } => field_error(name, reason),
            other => other,
        };
        self.fiber.validate().map_err(rename)?;
        self.schedule.validate().map_err(rename)?;
        if self.l_values.is_empty() {
            return Err(field_error("l_values", "at least one azimuthal order is required"));
        }
        if self.l_values.contains(&0) {
            return Err(field_error("l_values", "azimuthal orders must be nonzero"));
        }
        if !self.phi.is_finite() {
            return Err(field_error("phi", "must be finite"));
        }
        if self.trials == 0 {
            return Err(field_error("trials", "need at least one trial"));
        }
        if self.sample_points < 2 {
            return Err(field_error("sample_points", "need at least two sample distances"));
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
        let cfg = Self {
            fiber: FiberSpec {
                length_m: file.length_m,
                segments: file.segments,
                sigma: file.sigma,
                mean_phase: file.mean_phase,
                correlation: file.correlation,
                anchor_count: file.anchor_count,
            },
            schedule: ScheduleSpec {
                scheme: file.scheme,
                pulse_count: file.pulse_count,
                placement: file.placement,
            },
            l_values: file.l_values,
            phi: file.phi,
            trials: file.trials,
            master_seed: file.master_seed,
            sample_points: file.sample_points,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        let file = ConfigFile {
            length_m: self.fiber.length_m,
            segments: self.fiber.segments,
            sigma: self.fiber.sigma,
            mean_phase: self.fiber.mean_phase,
            correlation: self.fiber.correlation,
            anchor_count: self.fiber.anchor_count,
            scheme: self.schedule.scheme,
            pulse_count: self.schedule.pulse_count,
            placement: self.schedule.placement,
            l_values: self.l_values.clone(),
            phi: self.phi,
            trials: self.trials,
            master_seed: self.master_seed,
            sample_points: self.sample_points,
        };
        toml::to_string(&file).map_err(|e| Error::ConfigParse(e.to_string()))
    }
}
