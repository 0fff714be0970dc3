//! Collisional charging of a hybrid quantum battery.
//!
//! A single bosonic mode is charged by a stream of effective two-level atoms
//! through an engineered anti-Jaynes-Cummings coupling (a far-detuned Raman
//! configuration with the intermediate level eliminated). Each atom collides
//! with the field once, for a time chosen to maximise the field's energy
//! gain. The crate provides:
//!
//! - [`qla`]: a small dense complex linear-algebra layer (Hermitian
//!   eigendecomposition, Kronecker products, partial traces, entropies),
//!   generic over the real scalar type.
//! - [`model`]: physical parameters, doublet quantities, thermal states and
//!   the effective / full three-level Hamiltonians.
//! - [`optimize`]: the grid-then-golden-section collision time search.
//! - [`engines`]: uncorrelated, classically correlated and GHZ-entangled
//!   charging protocols plus the exact-unitary verification path.
//! - [`observables`]: ergotropy (passive, entropic and Fock-space forms),
//!   closed-form predictions and photon statistics diagnostics.
//!
//! Units: ħ = 1 and the upper atomic level frequency ω_m = 1, so energies
//! are reported as U/ħω_m and temperatures as k_B T/ħω_m.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod engines;
pub mod error;
pub mod field;
pub mod model;
pub mod observables;
pub mod optimize;
pub mod qla;
pub mod scalar;

pub use error::{Error, Result};
pub use field::{AtomPopulations, FieldState};
pub use model::{ModelParams, RawParams};
pub use scalar::Real;

/// Complex dense matrix over `f64`.
pub type ComplexMatrix = qla::CMatrix<f64>;
/// Density matrix over `f64`.
pub type DensityMatrix = qla::Density<f64>;
/// Pure state vector over `f64`.
pub type StateVector = qla::StateVector<f64>;
/// Complex scalar used throughout the `f64` API.
pub type C64 = num_complex::Complex<f64>;
/// Ergotropy report over `f64`.
pub type ErgotropyReport = observables::ErgotropyReport<f64>;
