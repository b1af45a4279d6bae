//! Built-in experiments `fig1` to `fig5`.
//!
//! All presets share one fiber: 500 m in 1000 segments, zero mean drift,
//! and smooth noise built from [`PRESET_ANCHORS`] Rayleigh anchors per
//! trial. [`PRESET_SIGMA`] is the output of
//! `calibrate_sigma(fiber, 250.0, 1, 0.51)`: free evolution at `l = 1` is
//! within 0.01 of the fully mixed value half-way along the fiber. The
//! CPMG presets spend a fixed budget of [`PRESET_PULSES`] pulses on every
//! fiber length.
//!
//! Two further configurations exercise the analytic comparison on the same
//! geometry with fully correlated noise, see [`compare_config`].

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::noise::{rayleigh_variance, Correlation, FiberSpec};
use crate::propagation::ScheduleSpec;

use super::{run_experiment, sweep_l, ExperimentConfig, FidelityCurve};

pub const PRESET_LENGTH_M: f64 = 500.0;
pub const PRESET_SEGMENTS: usize = 1000;
pub const PRESET_ANCHORS: usize = 20;
pub const PRESET_SIGMA: f64 = 0.027_006_482_936_702_502;
pub const PRESET_PULSES: usize = 100;
pub const PRESET_TRIALS: usize = 10_000;
pub const PRESET_SEED: u64 = 0x0A11_CE5E_ED00_2016;
/// Superposition phase of the input state. Any value works; fidelity does
/// not depend on it.
pub const PRESET_PHI: f64 = 0.3;

/// Regime parameter `n |l| sqrt(dphi2)` of the in-regime comparison.
pub const COMPARE_IN_REGIME: f64 = 0.3;
/// Regime parameter of the comparison that must be flagged, not failed.
pub const COMPARE_OUT_OF_REGIME: f64 = 5.0;

/// Free evolution at `l = 1` over the preset geometry with fully
/// correlated noise, `sigma` chosen so that `n |l| sqrt(dphi2)` equals
/// `regime` at the fiber end (`dphi2` being the Rayleigh variance).
pub fn compare_config(regime: f64) -> Result<ExperimentConfig> {
    if !(regime > 0.0 && regime.is_finite()) {
        return Err(Error::InvalidArgument {
            name: "regime",
            reason: "must be positive and finite".into(),
        });
    }
    let unit_sd = rayleigh_variance(1.0).sqrt();
    let fiber = FiberSpec {
        sigma: regime / (PRESET_SEGMENTS as f64 * unit_sd),
        correlation: Correlation::FullyCorrelated,
        ..Preset::fiber()
    };
    let cfg = ExperimentConfig {
        fiber,
        schedule: ScheduleSpec::free(),
        l_values: vec![1],
        phi: PRESET_PHI,
        trials: PRESET_TRIALS,
        master_seed: PRESET_SEED,
        sample_points: 10,
    };
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// Free evolution, `l` in {1, 2, 10, 50, 100}, fidelity vs distance.
    Fig1,
    /// CPMG, `l = 2`, fidelity vs distance.
    Fig2,
    /// CPMG, `l = 10`.
    Fig3,
    /// CPMG, `l = 50`.
    Fig4,
    /// CPMG end-of-fiber fidelity for `l = 1..=100`.
    Fig5,
}

impl Preset {
    pub const ALL: [Preset; 5] = [Preset::Fig1, Preset::Fig2, Preset::Fig3, Preset::Fig4, Preset::Fig5];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
        }
    }

    pub fn fiber() -> FiberSpec {
        FiberSpec {
            length_m: PRESET_LENGTH_M,
            segments: PRESET_SEGMENTS,
            sigma: PRESET_SIGMA,
            mean_phase: 0.0,
            correlation: Correlation::Iid,
            anchor_count: PRESET_ANCHORS,
        }
    }

    pub fn config(&self) -> ExperimentConfig {
        let (schedule, l_values, sample_points) = match self {
            Preset::Fig1 => (ScheduleSpec::free(), vec![1, 2, 10, 50, 100], 20),
            Preset::Fig2 => (ScheduleSpec::cpmg(PRESET_PULSES), vec![2], 10),
            Preset::Fig3 => (ScheduleSpec::cpmg(PRESET_PULSES), vec![10], 10),
            Preset::Fig4 => (ScheduleSpec::cpmg(PRESET_PULSES), vec![50], 10),
            Preset::Fig5 => (ScheduleSpec::cpmg(PRESET_PULSES), (1..=100).collect(), 10),
        };
        ExperimentConfig {
            fiber: Self::fiber(),
            schedule,
            l_values,
            phi: PRESET_PHI,
            trials: PRESET_TRIALS,
            master_seed: PRESET_SEED,
            sample_points,
        }
    }

    /// `fig5` is an `l` sweep; the others are distance curves.
    pub fn is_sweep(&self) -> bool {
        matches!(self, Preset::Fig5)
    }

    pub fn run(&self, config: &ExperimentConfig, exec: Executor) -> Result<FidelityCurve> {
        if self.is_sweep() {
            sweep_l(config, exec)
        } else {
            run_experiment(config, exec)
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidArgument {
                name: "preset",
                reason: format!("unknown preset `{s}` (expected fig1..fig5)"),
            })
    }
}
