//! Angular algebra of a charged particle in the field of a magnetic monopole.
//!
//! The crate evaluates monopole spherical harmonics, exact Wigner 3-j symbols,
//! the gauge transformation that rotates the Wu-Yang potential into the
//! Dirac potential, the redefined parity operator, and the dipole selection
//! rules for the pseudoscalar (`σ₃`) and scalar (`I`) charge operators. Every
//! physical claim is computed along two independent routes and the routes are
//! compared.

pub mod cli;
pub mod error;
pub mod exact;
pub mod gauge;
pub mod harmonics;
pub mod quadrature;
pub mod rng;
pub mod selection;
pub mod wigner;

pub use error::{Error, Result};
pub use exact::{HalfInt, SignedSqrtRational};
