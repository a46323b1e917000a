//! Simulators for population and coherence transfer in atom and atom-cavity
//! systems: resonant pseudospin, three-level Λ adiabatic passage, a four-level
//! atom in a cavity, two atoms sharing a cavity photon, and the linearized
//! analytic model of nonadiabatic failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod bloch2;
pub mod cavity4;
pub mod error;
pub mod integrator;
pub mod lambda3;
pub mod pulses;
pub mod quadrature;
pub mod scenario;
pub mod sweep;
pub mod tables;
pub mod transfer;
pub mod twoatom;

pub use error::{Error, Result};
pub use integrator::{IntegratorConfig, Trajectory};
pub use pulses::{AsymptoticClass, Limit, PulseSpec, Shape};
pub use scenario::Scenario;
pub use sweep::{SweepAxis, SweepSurface};
pub use transfer::TransferResult;
