//! Experiment runner: configuration, figure presets, distance and `l`
//! sweeps, analytic cross-checks and CSV/SVG output.

mod calibrate;
mod config;
mod emit;
mod experiment;
mod presets;

pub use calibrate::{calibrate_sigma, free_phase_variance};
pub use config::ExperimentConfig;
pub use emit::{emit, format_significant, render_svg, to_csv_string, OutputFormat, CSV_HEADER};
pub use experiment::{
    compare_analytic, run_experiment, sweep_l, CompareRow, CompareStatus, CurveKind, FidelityCurve,
    FidelityRow,
};
pub use presets::{
    compare_config, Preset, COMPARE_IN_REGIME, COMPARE_OUT_OF_REGIME, PRESET_ANCHORS, PRESET_LENGTH_M,
    PRESET_PULSES, PRESET_SEED, PRESET_SEGMENTS, PRESET_SIGMA, PRESET_TRIALS,
};
