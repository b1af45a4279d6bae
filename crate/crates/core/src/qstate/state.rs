use num_complex::Complex64;

use super::{Operator2, NORM_TOLERANCE};
use crate::error::{invalid, Result};

/// Normalized amplitude pair over `{|+l>, |-l>}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateVector2 {
    plus: Complex64,
    minus: Complex64,
}

impl StateVector2 {
    /// Builds a state from raw amplitudes, rescaling them to unit norm.
    pub fn from_amplitudes(plus: Complex64, minus: Complex64) -> Result<Self> {
        let norm = (plus.norm_sqr() + minus.norm_sqr()).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(invalid("amplitudes", "state must have finite nonzero norm"));
        }
        Ok(Self {
            plus: plus / norm,
            minus: minus / norm,
        })
    }

    /// Accepts amplitudes that are already normalized within [`NORM_TOLERANCE`].
    pub fn try_new(plus: Complex64, minus: Complex64) -> Result<Self> {
        let s = Self { plus, minus };
        let drift = (s.norm_sqr() - 1.0).abs();
        if drift > NORM_TOLERANCE {
            return Err(invalid("amplitudes", format!("norm^2 deviates from 1 by {drift:e}")));
        }
        Ok(s)
    }

    pub fn basis_plus() -> Self {
        Self {
            plus: Complex64::new(1.0, 0.0),
            minus: Complex64::new(0.0, 0.0),
        }
    }

    pub fn basis_minus() -> Self {
        Self {
            plus: Complex64::new(0.0, 0.0),
            minus: Complex64::new(1.0, 0.0),
        }
    }

    #[inline]
    pub fn amp_plus(&self) -> Complex64 {
        self.plus
    }

    #[inline]
    pub fn amp_minus(&self) -> Complex64 {
        self.minus
    }

    #[inline]
    pub fn norm_sqr(&self) -> f64 {
        self.plus.norm_sqr() + self.minus.norm_sqr()
    }

    /// Applies `op` to the state. No renormalization is performed; unitary
    /// operators keep the norm to rounding error.
    #[inline]
    pub fn apply(&self, op: &Operator2) -> Self {
        let (plus, minus) = op.apply_to(self.plus, self.minus);
        Self { plus, minus }
    }

    /// Multiplies both amplitudes by `e^{i alpha}`.
    pub fn with_global_phase(&self, alpha: f64) -> Self {
        let g = Complex64::cis(alpha);
        Self {
            plus: self.plus * g,
            minus: self.minus * g,
        }
    }

    /// `<self|other>`
    #[inline]
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.plus.conj() * other.plus + self.minus.conj() * other.minus
    }

    /// Pure-state fidelity `|<self|other>|^2`.
    #[inline]
    pub fn overlap_sqr(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }
}

/// Equal superposition `(e^{i l phi}, e^{-i l phi}) / sqrt(2)` of the `+l`
/// and `-l` modes.
pub fn make_superposition_state(l: i32, phi: f64) -> Result<StateVector2> {
    if l == 0 {
        return Err(invalid("l", "azimuthal order must be nonzero"));
    }
    if !phi.is_finite() {
        return Err(invalid("phi", "phase must be finite"));
    }
    let arg = f64::from(l) * phi;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Ok(StateVector2 {
        plus: Complex64::cis(arg) * s,
        minus: Complex64::cis(-arg) * s,
    })
}
