//! Teleportation between an inertial sender and a uniformly accelerated
//! receiver, computed in truncated Fock space.
//!
//! The receiver sees the inertial vacuum as a two-mode squeezed state across
//! the two Rindler wedges. Tracing out the inaccessible wedge turns every
//! teleported state into a mixture, and the modules here compute that mixture
//! in closed form and by brute force:
//!
//! - [`fock`]: sparse states, density operators, partial trace, entropy.
//! - [`relativity`]: acceleration and frequency to squeeze parameter and
//!   Unruh temperature; worldline helpers.
//! - [`vacuum`]: inertial vacuum and one-particle states in wedge modes.
//! - [`teleport`]: dual-rail Bell resource, measurement outcomes, receiver
//!   states, corrections and fidelity.
//! - [`entropy`]: pre/post-measurement states and information gain.
//! - [`pdc`]: the parametric down-conversion analogue.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entropy;
pub mod error;
pub mod fock;
pub mod pdc;
pub mod relativity;
pub mod teleport;
pub mod vacuum;

pub use error::{Error, Result};
pub use fock::{DensityOperator, FockBasisState, ModeLabel, StateVector, Statistics};
