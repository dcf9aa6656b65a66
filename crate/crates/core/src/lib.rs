//! Quantum trajectories of a two-particle entanglement molecule.
//!
//! Two recoiling plane waves are superposed into one molecule wave function.
//! Its phase is the reduced action, and Jacobi's theorem on that action gives
//! the equation of motion `t(x)`. The crate evaluates those closed forms and
//! analyses the resulting trajectory (turning points, retrograde segments,
//! multiple simultaneous positions, wedge envelope), the particle / entanglon
//! split of `t(x)` and the α → 1 limit. It also writes datasets (CSV, JSON)
//! and SVG figures.

// NaN-rejecting guards are written as `!(a < b)` on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod action;
pub mod dataset;
pub mod error;
pub mod figure;
pub mod limits;
pub mod numerics;
pub mod params;
pub mod trajectory;
pub mod wavefunction;

pub use error::{ModelError, Result};
pub use params::{ModelParams, ParticlePositions};
