//! Choosing the Rayleigh scale from a target free-evolution fidelity.
//!
//! Under free evolution the relative phase after `m` segments is
//! `l * sum_{j<m} dphi_j`, a fixed linear combination of the trial's
//! Rayleigh anchors. Its variance is therefore
//! `l^2 * (4 - pi)/2 * sigma^2 * sum_a w_a^2` with interpolation weights
//! `w_a`, and treating the sum as Gaussian gives
//! `F = (1 + exp(-Var / 2)) / 2`.

use crate::error::{invalid, Result};
use crate::noise::{prefix_anchor_weights, rayleigh_variance, Correlation, FiberSpec};

fn weight_energy(fiber: &FiberSpec, prefix: usize) -> f64 {
    match fiber.correlation {
        Correlation::FullyCorrelated => {
            let m = prefix.min(fiber.segments) as f64;
            m * m
        }
        Correlation::Iid => prefix_anchor_weights(fiber.anchor_count, fiber.segments, prefix)
            .iter()
            .map(|w| w * w)
            .sum(),
    }
}

/// Variance of the free-evolution relative phase after `prefix` segments.
pub fn free_phase_variance(fiber: &FiberSpec, prefix: usize, l: i32) -> Result<f64> {
    fiber.validate()?;
    let lf = f64::from(l);
    Ok(lf * lf * rayleigh_variance(fiber.sigma) * weight_energy(fiber, prefix))
}

/// Rayleigh scale for which Gaussian-approximated free evolution of order
/// `l` reaches `target_fidelity` at `distance_m`. `fiber.sigma` is ignored.
pub fn calibrate_sigma(fiber: &FiberSpec, distance_m: f64, l: i32, target_fidelity: f64) -> Result<f64> {
    let mut unit = fiber.clone();
    unit.sigma = 1.0;
    unit.validate()?;
    if l == 0 {
        return Err(invalid("l", "azimuthal order must be nonzero"));
    }
    if !(target_fidelity > 0.5 && target_fidelity < 1.0) {
        return Err(invalid("target_fidelity", "must lie in (0.5, 1)"));
    }
    if !(distance_m > 0.0 && distance_m <= fiber.length_m) {
        return Err(invalid("distance_m", "must lie within the fiber"));
    }
    let prefix = (fiber.segments as f64 * distance_m / fiber.length_m).floor() as usize;
    let per_unit = free_phase_variance(&unit, prefix, l)?;
    if per_unit == 0.0 {
        return Err(invalid("distance_m", "no segments before this distance"));
    }
    let target_var = -2.0 * (2.0 * target_fidelity - 1.0).ln();
    Ok((target_var / per_unit).sqrt())
}
