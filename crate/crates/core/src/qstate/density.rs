use num_complex::Complex64;

use super::{StateVector2, FIDELITY_IMAG_TOLERANCE, NORM_TOLERANCE};
use crate::error::{Error, Result};

/// Unit-trace Hermitian 2x2 density matrix.
///
/// Only `rho_00`, `rho_11` and `rho_01` are stored; `rho_10 = conj(rho_01)`
/// holds by construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix2 {
    r00: f64,
    r11: f64,
    r01: Complex64,
}

impl DensityMatrix2 {
    /// Validated constructor: trace 1 within [`NORM_TOLERANCE`] and
    /// eigenvalues no lower than `-NORM_TOLERANCE`.
    pub fn try_new(r00: f64, r01: Complex64, r11: f64) -> Result<Self> {
        let rho = Self { r00, r11, r01 };
        rho.check()?;
        Ok(rho)
    }

    /// Constructor for values produced by trusted internal routines.
    pub(crate) fn from_parts(r00: f64, r01: Complex64, r11: f64) -> Self {
        Self { r00, r11, r01 }
    }

    pub fn maximally_mixed() -> Self {
        Self::from_parts(0.5, Complex64::new(0.0, 0.0), 0.5)
    }

    /// `|psi><psi|`
    pub fn from_state(psi: &StateVector2) -> Self {
        let a = psi.amp_plus();
        let b = psi.amp_minus();
        Self::from_parts(a.norm_sqr(), a * b.conj(), b.norm_sqr())
    }

    pub fn check(&self) -> Result<()> {
        let fields = [self.r00, self.r11, self.r01.re, self.r01.im];
        if fields.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvariantViolation("non-finite density matrix entry".into()));
        }
        let tr_err = (self.trace() - 1.0).abs();
        if tr_err > NORM_TOLERANCE {
            return Err(Error::InvariantViolation(format!(
                "trace deviates from 1 by {tr_err:e}"
            )));
        }
        let (lo, _) = self.eigenvalues();
        if lo < -NORM_TOLERANCE {
            return Err(Error::InvariantViolation(format!(
                "negative eigenvalue {lo:e}"
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn rho00(&self) -> f64 {
        self.r00
    }

    #[inline]
    pub fn rho11(&self) -> f64 {
        self.r11
    }

    #[inline]
    pub fn rho01(&self) -> Complex64 {
        self.r01
    }

    #[inline]
    pub fn rho10(&self) -> Complex64 {
        self.r01.conj()
    }

    /// Entries as a dense row-major matrix.
    pub fn to_matrix(&self) -> [[Complex64; 2]; 2] {
        [
            [Complex64::new(self.r00, 0.0), self.r01],
            [self.r01.conj(), Complex64::new(self.r11, 0.0)],
        ]
    }

    pub fn trace(&self) -> f64 {
        self.r00 + self.r11
    }

    /// `trace(rho^2)`
    pub fn purity(&self) -> f64 {
        self.r00 * self.r00 + self.r11 * self.r11 + 2.0 * self.r01.norm_sqr()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.r00 + self.r11);
        let half_gap = 0.5 * (self.r00 - self.r11);
        let rad = (half_gap * half_gap + self.r01.norm_sqr()).sqrt();
        (mean - rad, mean + rad)
    }

    /// `rho * rho` as a dense matrix.
    pub fn squared(&self) -> [[Complex64; 2]; 2] {
        let m = self.to_matrix();
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = m[i][0] * m[0][j] + m[i][1] * m[1][j];
            }
        }
        out
    }
}

/// `<psi|rho|psi>`.
///
/// The quadratic form is evaluated in full complex arithmetic; an imaginary
/// residue above [`FIDELITY_IMAG_TOLERANCE`] is reported as an invariant
/// violation, smaller residues are dropped. The real part is clamped to
/// `[0, 1]`.
pub fn fidelity(psi: &StateVector2, rho: &DensityMatrix2) -> Result<f64> {
    let a = psi.amp_plus();
    let b = psi.amp_minus();
    let row0 = a * rho.rho00() + b * rho.rho01();
    let row1 = a * rho.rho10() + b * rho.rho11();
    let form = a.conj() * row0 + b.conj() * row1;
    if form.im.abs() > FIDELITY_IMAG_TOLERANCE {
        return Err(Error::InvariantViolation(format!(
            "fidelity quadratic form has imaginary part {:e}",
            form.im
        )));
    }
    Ok(form.re.clamp(0.0, 1.0))
}
