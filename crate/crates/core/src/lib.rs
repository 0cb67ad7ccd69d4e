//! Nonequilibrium fluctuational electrodynamics for small bodies.
//!
//! The crate computes quantum friction near surfaces and in vacuum, the
//! nonequilibrium steady-state temperature of a moving particle, the
//! self-propulsive force and vacuum torques on inhomogeneous bodies, and the
//! terminal velocities reached while such a body thermalizes.
//!
//! Internally everything is in natural units (ħ = c = ε₀ = μ₀ = k_B = 1) with
//! energies in eV, so frequencies are eV, lengths eV⁻¹ and forces eV².
//! [`units::UnitContext`] converts at the edges; public entry points that say
//! so in their docs take and return SI values.

pub mod dynamics;
pub mod error;
pub mod friction;
pub mod geometry;
pub mod kernels;
pub mod material;
pub mod quad;
pub mod relax;
pub mod special;
pub mod units;

pub use error::{Error, Result};
pub use geometry::{BodyGeometry, QuadratureSpec, TwoPartBody};
pub use kernels::{PhiEvalPolicy, ThermalPair};
pub use material::{DrudeParams, Material};
pub use quad::Estimate;
pub use units::UnitContext;
