//! Subwavelength resonances of dispersive dielectric nano-resonators.

pub mod cli;
pub mod dimer;
pub mod error;
pub mod geometry;
pub mod kernel;
pub mod resonance;
pub mod spectral;

pub use error::{Error, Result};
