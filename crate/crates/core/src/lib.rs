//! Fermi phase-space functions of quantum states.
//!
//! Closed forms for squeezed coherent states and harmonic-oscillator
//! eigenstates, symplectic capacities of the resulting ellipsoids, and a
//! finite-difference / FFT pipeline for arbitrary sampled 1-D wavefunctions.

// `!(a > b)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capacity;
pub mod error;
pub mod gaussian;
pub mod numerical;
pub mod oscillator;
pub mod symplectic_linalg;

pub use error::{Error, Result};
