//! Prints the TOML of a built-in configuration.
//!
//! ```text
//! cargo run -p oam-dephasing --example dump_config -- fig2
//! cargo run -p oam-dephasing --example dump_config -- compare_in_regime
//! ```

use oam_dephasing::harness::{compare_config, Preset, COMPARE_IN_REGIME, COMPARE_OUT_OF_REGIME};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).ok_or("usage: dump_config <fig1..fig5|compare_in_regime|compare_out_of_regime>")?;
    let cfg = match name.as_str() {
        "compare_in_regime" => compare_config(COMPARE_IN_REGIME)?,
        "compare_out_of_regime" => compare_config(COMPARE_OUT_OF_REGIME)?,
        other => other.parse::<Preset>()?.config(),
    };
    print!("{}", cfg.to_toml_string()?);
    Ok(())
}
