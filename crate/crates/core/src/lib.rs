//! Coupled-mode simulator for a metal nanoparticle, a quantum emitter and a
//! dielectric microcavity.
//!
//! Energies are in eV, lengths in nm and ħ = 1 throughout.

pub mod config;
pub mod couplings;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod materials;
pub mod network;
pub mod numerics;
pub mod output;
pub mod quantities;

pub use error::{Error, Result};
