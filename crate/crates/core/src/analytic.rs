//! Closed-form Gaussian dephasing model.
//!
//! Writing every segment phase as `phi0 + Delta` with a single zero-mean
//! deviation `Delta` of variance `dphi2` shared along the fiber, the
//! coherence after `n` segments is multiplied by
//! `<exp(i n l Delta)> ~ exp(-n^2 l^2 dphi2 / 2)`. The second-order
//! truncation behind that step holds while `n |l| sqrt(dphi2)` stays small;
//! [`GAUSSIAN_REGIME_LIMIT`] is the cutoff used by the validation harness.

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::qstate::DensityMatrix2;

/// Largest `n |l| sqrt(dphi2)` for which Monte Carlo results are compared
/// against the closed form.
pub const GAUSSIAN_REGIME_LIMIT: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticParams {
    /// Number of segments (proportional to distance; `n = k z` up to a
    /// constant).
    pub n: f64,
    /// Azimuthal order.
    pub l: i32,
    /// Mean per-segment phase.
    pub phi0: f64,
    /// Variance of the per-segment phase deviation.
    pub dphi2: f64,
    /// Superposition phase of the input state.
    pub theta: f64,
}

impl AnalyticParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.n >= 0.0 && self.n.is_finite()) {
            return Err(invalid("n", "segment count must be finite and nonnegative"));
        }
        if self.dphi2.is_nan() || self.dphi2 < 0.0 {
            return Err(invalid("dphi2", "variance must be nonnegative"));
        }
        if !self.phi0.is_finite() || !self.theta.is_finite() {
            return Err(invalid("phi0", "phases must be finite"));
        }
        Ok(())
    }

    /// `n |l|`, the only combination of `n` and `l` the model depends on.
    fn scaled_length(&self) -> f64 {
        self.n * f64::from(self.l.unsigned_abs())
    }

    /// `n |l| sqrt(dphi2)`
    pub fn regime_parameter(&self) -> f64 {
        self.scaled_length() * self.dphi2.sqrt()
    }
}

/// `exp(-n^2 l^2 dphi2 / 2)`
pub fn decoherence_factor(params: &AnalyticParams) -> Result<f64> {
    params.validate()?;
    let x = params.scaled_length();
    Ok((-0.5 * x * x * params.dphi2).exp())
}

/// Output density matrix with diagonal `1/2` and coherence
/// `1/2 e^{i l (2 theta + n phi0)} exp(-n^2 l^2 dphi2 / 2)`.
pub fn analytic_rho_out(params: &AnalyticParams) -> Result<DensityMatrix2> {
    let decay = decoherence_factor(params)?;
    let phase = f64::from(params.l) * (2.0 * params.theta + params.n * params.phi0);
    let rho = DensityMatrix2::from_parts(0.5, Complex64::from_polar(0.5 * decay, phase), 0.5);
    rho.check()?;
    Ok(rho)
}

/// Fidelity of [`analytic_rho_out`] with the undisturbed input state,
/// `(1 + cos(n l phi0) exp(-n^2 l^2 dphi2 / 2)) / 2`.
pub fn analytic_fidelity(params: &AnalyticParams) -> Result<f64> {
    let decay = decoherence_factor(params)?;
    let drift = (params.scaled_length() * params.phi0).cos();
    Ok(0.5 * (1.0 + drift * decay))
}
