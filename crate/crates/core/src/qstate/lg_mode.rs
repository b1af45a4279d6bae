//! Laguerre-Gauss radial mode profiles.

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Parameters of a Laguerre-Gauss mode `LG_{p,l}` at propagation distance `z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LGModeParams {
    /// Radial index.
    pub p: u32,
    /// Azimuthal index.
    pub l: i32,
    /// Beam waist.
    pub w0: f64,
    /// Wavenumber.
    pub k: f64,
    /// Distance from the waist.
    pub z: f64,
}

impl LGModeParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.w0 > 0.0 && self.w0.is_finite()) {
            return Err(invalid("w0", "beam waist must be positive"));
        }
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(invalid("k", "wavenumber must be positive"));
        }
        if !self.z.is_finite() {
            return Err(invalid("z", "distance must be finite"));
        }
        Ok(())
    }

    /// `z_R = k w0^2 / 2`
    pub fn rayleigh_range(&self) -> f64 {
        0.5 * self.k * self.w0 * self.w0
    }

    /// `w(z) = w0 sqrt(1 + (z/z_R)^2)`
    pub fn beam_width(&self) -> f64 {
        let q = self.z / self.rayleigh_range();
        self.w0 * (1.0 + q * q).sqrt()
    }

    /// Wavefront radius `R(z) = z (1 + (z_R/z)^2)`; `None` at the waist,
    /// where the wavefront is flat.
    pub fn curvature_radius(&self) -> Option<f64> {
        if self.z == 0.0 {
            return None;
        }
        let q = self.rayleigh_range() / self.z;
        Some(self.z * (1.0 + q * q))
    }

    /// `(2p + |l| + 1) atan(z / z_R)`
    pub fn gouy_phase(&self) -> f64 {
        self.mode_order() * (self.z / self.rayleigh_range()).atan()
    }

    fn mode_order(&self) -> f64 {
        f64::from(2 * self.p + self.l.unsigned_abs() + 1)
    }

    /// Amplitude constant `A = 2 sqrt(p! / (p+|l|)!)`, which gives
    /// `int_0^inf |R(r)|^2 r dr = 1`.
    pub fn normalization(&self) -> f64 {
        let abs_l = self.l.unsigned_abs();
        // p!/(p+|l|)! = 1 / ((p+1)(p+2)...(p+|l|))
        let ratio: f64 = (1..=abs_l).map(|i| 1.0 / f64::from(self.p + i)).product();
        2.0 * ratio.sqrt()
    }
}

/// Generalized Laguerre polynomial `L_n^alpha(x)` by the three-term recurrence.
pub fn generalized_laguerre(n: u32, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = f64::from(k);
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Complex radial profile `R_{p,l}(r)` including the Gaussian envelope,
/// the wavefront-curvature phase and the Gouy phase.
pub fn lg_radial(params: &LGModeParams, r: f64) -> Result<Complex64> {
    params.validate()?;
    if !(r >= 0.0 && r.is_finite()) {
        return Err(invalid("r", "radius must be finite and nonnegative"));
    }
    let w = params.beam_width();
    let abs_l = params.l.unsigned_abs();
    let s = r / w;
    let amplitude = params.normalization() / w
        * (std::f64::consts::SQRT_2 * s).powi(abs_l as i32)
        * generalized_laguerre(params.p, f64::from(abs_l), 2.0 * s * s)
        * (-s * s).exp();
    let curvature = match params.curvature_radius() {
        Some(radius) => params.k * r * r / (2.0 * radius),
        None => 0.0,
    };
    Ok(Complex64::from_polar(amplitude, curvature + params.gouy_phase()))
}
