//! Dephasing of single-photon orbital-angular-momentum (OAM) qubits in a
//! segmented multimode fiber.
//!
//! The qubit lives on the two-mode basis `{|+l>, |-l>}`. Refractive-index
//! fluctuations are modelled as a chain of homogeneous fiber segments, each
//! imprinting a random relative phase `l * dphi_j` between the two arms. The
//! crate provides
//!
//! * [`qstate`]: two-level state and density-matrix algebra, fidelity,
//!   Laguerre-Gauss radial modes and qudit-dimension counting,
//! * [`noise`]: Rayleigh phase-error profiles with deterministic per-trial
//!   seeding,
//! * [`propagation`]: segment operators, Dove-prism flip pulses, CPMG
//!   schedules and ensemble-averaged output states,
//! * [`analytic`]: the closed-form Gaussian dephasing model,
//! * [`harness`]: experiment configuration, figure presets, sweeps and
//!   CSV/SVG output.
//!
//! Monte Carlo trials run on a rayon pool when the `parallel` feature is
//! enabled (the default); otherwise every [`Executor`] runs sequentially.
//! Results are bit-identical either way.

pub mod analytic;
pub mod error;
pub mod exec;
pub mod harness;
pub mod noise;
pub mod propagation;
pub mod qstate;

pub use error::{Error, Result};
pub use exec::Executor;
