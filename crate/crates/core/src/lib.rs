//! Trajectory-representation microstates for the semi-infinite step barrier
//! and the finite square well: conjugate momenta, dwell times, libration
//! periods and their extremal bounds, trajectory time-of-flight, and
//! past/present coverage compared against the Copenhagen density support.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coverage;
pub mod error;
pub mod exec;
pub mod microstate;
pub mod numeric;
pub mod potential;
pub mod times;
pub mod trajectory;
pub mod wavefield;

pub use error::{Error, Result};
pub use exec::Exec;
pub use microstate::{normalize, transform_basis, BasisRescale, Coefficients, Microstate};
pub use potential::{
    bound_state_energies, make_kinematics, BoundState, Kinematics, Parity, ParityFilter, Potential,
    Region, Units,
};
