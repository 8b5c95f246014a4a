use rayon::prelude::*;

use super::steady::{steady_state, DriveSpec, SteadyState};
use crate::error::{Error, Result};
use crate::network::{ChannelId, EffectiveHamiltonian, ModeLabel};
use crate::quantities::Energy;

/// Steady states over a pump-detuning sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub driven: ModeLabel,
    /// Pump detuning from the frame reference, eV.
    pub detunings: Vec<f64>,
    pub states: Vec<SteadyState>,
}

impl SpectrumResult {
    /// Total radiated power (coherent rad₁ plus rad₂).
    pub fn total_radiative(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.radiative()).collect()
    }

    pub fn total_ohmic(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.ohmic()).collect()
    }

    pub fn channel(&self, id: ChannelId) -> Vec<f64> {
        self.states.iter().map(|s| s.power(id)).collect()
    }

    pub fn population(&self, label: ModeLabel) -> Vec<f64> {
        self.states.iter().map(|s| s.population(label)).collect()
    }

    pub fn yields(&self) -> Result<Vec<f64>> {
        self.states.iter().map(super::quantum_yield).collect()
    }
}

/// Drives `driven` with unit amplitude at every detuning in `detunings`.
/// Points are evaluated in parallel; the result keeps the input order.
pub fn emission_spectrum(h: &EffectiveHamiltonian, driven: ModeLabel, detunings: &[f64]) -> Result<SpectrumResult> {
    if detunings.is_empty() {
        return Err(Error::Domain("empty detuning grid".into()));
    }
    let states = detunings
        .par_iter()
        .map(|&d| steady_state(h, &DriveSpec::unit(driven, Energy(d))))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumResult {
        driven,
        detunings: detunings.to_vec(),
        states,
    })
}

/// Indices of strict interior local maxima.
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] > values[i - 1] && values[i] > values[i + 1])
        .collect()
}

/// Distance between the two highest local maxima, if there are two.
pub fn doublet_separation(x: &[f64], values: &[f64]) -> Option<f64> {
    let mut peaks = local_maxima(values);
    if peaks.len() < 2 {
        return None;
    }
    peaks.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    Some((x[peaks[0]] - x[peaks[1]]).abs())
}
