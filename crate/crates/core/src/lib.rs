//! Semiclassical eigenvalues and Bloch waves of Mathieu's equation in Fourier space, and
//! the dynamical diffraction of a plane wave by a sinusoidal potential.
//!
//! Beams are indexed by n, with scaled momentum y = n / sqrt(Lambda); eigenvalues are
//! reported as beta = E / Lambda, with the separatrix at beta = 1.

pub mod cli;
pub mod compare;
pub mod diffraction;
pub mod error;
pub mod numerics;
pub mod specialfn;

pub use error::{Error, Result};
pub mod rn_oracle;
pub mod separatrix;
pub mod types;
pub mod uniform_bound;
pub mod wkb_core;

pub use types::{BlochWave, Eigenstate, Method, ModelParams, Regime};
