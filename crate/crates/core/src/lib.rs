//! Numerical model of the time-dependent Aharonov-Bohm phase and of the
//! three-crystal (diamond) electron interferometer in a stray uniform field.
//!
//! Units are Gaussian CGS throughout: lengths in cm, times in s, fields in
//! gauss (statvolt/cm for E), charges in statcoulomb, phases in radians.
//!
//! The crate is organised bottom-up:
//!
//! * [`constants`], [`geometry`], [`quadrature`], [`diff`]: constants,
//!   vectors/events/paths, line and surface quadrature, finite differences.
//! * [`fields`]: closed-form solenoid and uniform fields.
//! * [`phase`]: electric/magnetic decomposition of the loop phase.
//! * [`interferometer`]: exact arc geometry of the diamond interferometer.
//! * [`trajectory`]: relativistic Lorentz-force integrator used as an
//!   independent oracle for the arc geometry.
//! * [`regression`]: log-log power-law fits.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod constants;
pub mod diff;
mod error;
pub mod fields;
pub mod geometry;
pub mod interferometer;
pub mod phase;
pub mod quadrature;
pub mod regression;
pub mod trajectory;

pub use constants::{PhysicalConstants, CGS};
pub use error::{Error, Result};
pub use fields::{Solenoid, UniformField, Waveform};
pub use geometry::{Event, TimedPath, Vec3};
