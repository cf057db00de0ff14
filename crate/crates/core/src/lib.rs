//! Wave-packet simulation of a tunneling beam splitter for massive particles.
//!
//! Particles glide along two grooves that approach each other and separate
//! again. In the paraxial picture the longitudinal motion is a uniform
//! drift, so the transverse wave function sees a double well swept in time.

pub mod analytic;
mod error;
pub mod grid;
pub mod harness;
pub mod potential;
pub mod propagator;
pub mod scaling;
mod spectral;
pub mod spectrum;
pub mod twoparticle;

pub use error::{Error, Result};
