//! Two-level OAM qubit algebra.
//!
//! Basis ordering is `[|+l>, |-l>]` everywhere. The common radial factor
//! `|R_{p,l}(r)|^2` that multiplies every density matrix is normalized out,
//! so a [`DensityMatrix2`] is the unit-trace 2x2 block.

mod density;
mod lg_mode;
mod operator;
mod qudit;
mod state;

pub use density::{fidelity, DensityMatrix2};
pub use lg_mode::{generalized_laguerre, lg_radial, LGModeParams};
pub use operator::Operator2;
pub use qudit::{qudit_bits, qudit_dimension};
pub use state::{make_superposition_state, StateVector2};

/// Tolerance on unit norm / unit trace used by constructors.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Largest imaginary part of `<psi|rho|psi>` accepted before it is reported
/// as an invariant violation.
pub const FIDELITY_IMAG_TOLERANCE: f64 = 1e-9;
