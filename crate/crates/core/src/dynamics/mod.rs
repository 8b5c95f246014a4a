//! Steady-state response, channel powers, time evolution, emission spectra
//! and eigen-branch analysis of an [`EffectiveHamiltonian`].
//!
//! [`EffectiveHamiltonian`]: crate::network::EffectiveHamiltonian

mod branches;
mod evolution;
mod spectrum;
mod steady;

pub use branches::{eigen_branches, polariton_pair, BranchSummary, EigenBranchSet, PolaritonPair};
pub use evolution::{count_oscillation_maxima, default_time_grid, evolve, evolve_rk45, propagate, TimeTrace};
pub use spectrum::{doublet_separation, emission_spectrum, local_maxima, SpectrumResult};
pub use steady::{fano_detuning, quantum_yield, steady_state, ChannelPower, DriveSpec, SteadyState};
