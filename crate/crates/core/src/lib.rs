//! Fixed-energy amplitude and bound-state spectrum of a charged particle in
//! the field of an Aharonov-Bohm flux line plus an attractive Coulomb
//! centre, in natural units with `hbar = 1`.
//!
//! The crate evaluates the amplitude two independent ways (a q-integral
//! over products of modified Bessel functions, and a partial-wave sum over
//! Whittaker functions), exposes the Kustaanheimo-Stiefel geometry that
//! links the problem to a pair of planar oscillators, and checks the
//! closed-form spectrum against a finite-difference radial solver.

pub mod amplitude;
pub mod error;
pub mod kstransform;
pub mod oracle;
pub mod quadrature;
pub mod specfun;
pub mod spectrum;

pub use amplitude::{AmplitudeValue, EndpointPair, FixedEnergy, TruncationSpec};
pub use error::{Error, Result};
pub use kstransform::{AuxAngle, DoublePolar, KsPoint, SphericalPoint};
pub use oracle::{OracleResult, RadialGrid};
pub use specfun::{RealOrder, SpecialValue};
pub use spectrum::{Level, PhysParams, QuantumNumbers};
