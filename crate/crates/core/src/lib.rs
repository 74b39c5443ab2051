//! Steady-state phonon occupancy of a levitated YIG sphere in a microwave
//! cavity, cooled through a magnon mode whose self-Kerr nonlinearity is
//! pumped into degenerate squeezing.
//!
//! The pipeline runs from physical constants ([`constants`]) through the
//! classical drive amplitudes ([`design`]) and the squeezed frame
//! ([`bogoliubov`]) to the second-moment dynamics ([`moments`]) and the
//! weak-coupling closed forms ([`analytic`]). [`point`] bundles one
//! operating point end to end.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod bogoliubov;
pub mod constants;
pub mod design;
pub mod error;
pub mod moments;
pub mod point;

pub use bogoliubov::{build_frame, optimal_phases, BogoliubovFrame, OptimalPhases};
pub use constants::{GeometryParams, PhysicalConstants, SystemParams};
pub use design::{DriveConfig, DriveDesign, DrivePowers, LinearizedParams, SteadyAmplitudes};
pub use error::{Error, Result};
pub use moments::{LinearSystem, MomentState};
