use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, solve, CMatrix, CVector};
use crate::network::{ChannelId, ChannelKind, Combine, EffectiveHamiltonian, ModeLabel};
use crate::quantities::{ensure_finite, Energy};

/// A coherent drive of one mode at pump detuning `detuning` from the frame
/// reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSpec {
    pub mode: ModeLabel,
    pub amplitude: f64,
    pub detuning: Energy,
}

impl DriveSpec {
    /// Unit-amplitude drive.
    pub fn unit(mode: ModeLabel, detuning: Energy) -> Self {
        Self {
            mode,
            amplitude: 1.0,
            detuning,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelPower {
    pub id: ChannelId,
    pub kind: ChannelKind,
    /// Power as defined by the channel's combine rule.
    pub power: f64,
    /// `Σ γ_k |v_k|²`, identical to `power` for incoherent channels.
    pub diagonal: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub detuning: Energy,
    pub basis: Vec<ModeLabel>,
    pub amplitudes: CVector,
    pub channels: Vec<ChannelPower>,
    /// `2 Im(v† f)`, the power delivered by the drive.
    pub injected: f64,
}

impl SteadyState {
    pub fn amplitude(&self, label: ModeLabel) -> Option<Complex64> {
        self.basis.iter().position(|&l| l == label).map(|i| self.amplitudes[i])
    }

    /// `|v|²` of a mode, zero when the mode is absent.
    pub fn population(&self, label: ModeLabel) -> f64 {
        self.amplitude(label).map_or(0.0, |z| z.norm_sqr())
    }

    /// Power of one channel, zero when the channel is absent.
    pub fn power(&self, id: ChannelId) -> f64 {
        self.channels.iter().find(|ch| ch.id == id).map_or(0.0, |ch| ch.power)
    }

    pub fn radiative(&self) -> f64 {
        self.sum_kind(ChannelKind::Radiative)
    }

    pub fn ohmic(&self) -> f64 {
        self.sum_kind(ChannelKind::Ohmic)
    }

    fn sum_kind(&self, kind: ChannelKind) -> f64 {
        self.channels.iter().filter(|ch| ch.kind == kind).map(|ch| ch.power).sum()
    }

    /// `Σ γ_i |v_i|²` over every mode.
    pub fn dissipated(&self) -> f64 {
        self.channels.iter().map(|ch| ch.diagonal).sum()
    }

    /// Interference term of coherent channels (`power − diagonal`).
    pub fn cross_term(&self) -> f64 {
        self.channels.iter().map(|ch| ch.power - ch.diagonal).sum()
    }
}

/// Solves `(Δ_p I − H) v = f` and evaluates every output channel.
pub fn steady_state(h: &EffectiveHamiltonian, drive: &DriveSpec) -> Result<SteadyState> {
    ensure_finite("drive amplitude", drive.amplitude)?;
    ensure_finite("pump detuning", drive.detuning.0)?;
    let idx = h
        .index_of(drive.mode)
        .ok_or_else(|| Error::Domain(format!("driven mode {} is not in the basis", drive.mode)))?;
    let n = h.dim();
    let mut f = CVector::zeros(n);
    f[idx] = c(drive.amplitude, 0.0);
    let a = CMatrix::identity(n, n) * c(drive.detuning.0, 0.0) - &h.matrix;
    let v = solve(&a, &f)?;
    let channels = h
        .channels
        .iter()
        .map(|ch| {
            let mut coherent = c(0.0, 0.0);
            let mut diagonal = 0.0;
            for (mode, rate) in &ch.terms {
                let z = h.index_of(*mode).map_or(c(0.0, 0.0), |i| v[i]);
                coherent += z * rate.0.sqrt();
                diagonal += rate.0 * z.norm_sqr();
            }
            let power = match ch.combine {
                Combine::Coherent => coherent.norm_sqr(),
                Combine::Incoherent => diagonal,
            };
            ChannelPower {
                id: ch.id,
                kind: ch.kind,
                power,
                diagonal,
            }
        })
        .collect();
    let injected = 2.0 * v.dotc(&f).im;
    Ok(SteadyState {
        detuning: drive.detuning,
        basis: h.basis.clone(),
        amplitudes: v,
        channels,
        injected,
    })
}

/// Radiated power over total dissipated power.
pub fn quantum_yield(state: &SteadyState) -> Result<f64> {
    let rad = state.radiative();
    let total = rad + state.ohmic();
    if total <= 0.0 {
        return Err(Error::UndefinedYield);
    }
    Ok(rad / total)
}

/// Pump-cavity detuning of the Fano valley, `Δ₀ = −J g₁ / G`.
pub fn fano_detuning(cavity_emitter: Energy, plasmon_cavity: Energy, plasmon_emitter: Energy) -> Result<Energy> {
    if plasmon_emitter.0 == 0.0 || !plasmon_emitter.0.is_finite() {
        return Err(Error::Domain("Fano detuning needs a nonzero plasmon-emitter coupling".into()));
    }
    Ok(Energy(-cavity_emitter.0 * plasmon_cavity.0 / plasmon_emitter.0))
}
