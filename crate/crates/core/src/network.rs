//! Non-Hermitian effective Hamiltonians of the plasmon / cavity / emitter
//! network and the output channels through which it dissipates.
//!
//! Basis order is always (dipolar plasmon, cavity, emitter), restricted to
//! the modes present. Diagonal entries are `detuning − iγ/2` with γ the sum
//! of the mode's channel rates; off-diagonals are the real signed couplings,
//! so every matrix is complex-symmetric.

use std::fmt;

use crate::couplings::CouplingSet;
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};
use crate::quantities::{ensure_finite, ensure_non_negative, Energy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModeLabel {
    PlasmonDipole,
    Cavity,
    Emitter,
}

impl ModeLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ModeLabel::PlasmonDipole => "plasmon_dipole",
            ModeLabel::Cavity => "cavity",
            ModeLabel::Emitter => "emitter",
        }
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChannelId {
    /// Free-space radiation (plasmon, plus emitter when present).
    Rad1,
    /// Leakage through the cavity.
    Rad2,
    /// Ohmic absorption of the dipolar plasmon.
    Ohm1,
    /// Absorption by the multipole plasmon bath via the emitter.
    Ohm2,
}

impl ChannelId {
    pub fn as_str(self) -> &'static str {
        match self {
            ChannelId::Rad1 => "rad1",
            ChannelId::Rad2 => "rad2",
            ChannelId::Ohm1 => "ohm1",
            ChannelId::Ohm2 => "ohm2",
        }
    }

    pub fn kind(self) -> ChannelKind {
        match self {
            ChannelId::Rad1 | ChannelId::Rad2 => ChannelKind::Radiative,
            ChannelId::Ohm1 | ChannelId::Ohm2 => ChannelKind::Ohmic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    Radiative,
    Ohmic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combine {
    /// `|Σ √γ_k v_k|²`
    Coherent,
    /// `Σ γ_k |v_k|²`
    Incoherent,
}

/// An output operator `Σ √γ_k a_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputChannel {
    pub id: ChannelId,
    pub kind: ChannelKind,
    /// (mode, rate γ); the amplitude weight is √γ.
    pub terms: Vec<(ModeLabel, Energy)>,
    pub combine: Combine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelScenario {
    MnpOnly,
    WithEmitter,
}

/// Every dissipation rate in the network.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Rates {
    pub plasmon_radiative: Energy,
    pub plasmon_ohmic: Energy,
    pub cavity: Energy,
    pub emitter_radiative: Energy,
    pub emitter_quench: Energy,
}

impl Rates {
    fn validate(&self) -> Result<()> {
        ensure_non_negative("plasmon radiative rate", self.plasmon_radiative.0)?;
        ensure_non_negative("plasmon Ohmic rate", self.plasmon_ohmic.0)?;
        ensure_non_negative("cavity decay rate", self.cavity.0)?;
        ensure_non_negative("emitter radiative rate", self.emitter_radiative.0)?;
        ensure_non_negative("emitter quench rate", self.emitter_quench.0)?;
        Ok(())
    }

    pub fn plasmon_total(&self) -> Energy {
        self.plasmon_radiative + self.plasmon_ohmic
    }

    pub fn emitter_total(&self) -> Energy {
        self.emitter_radiative + self.emitter_quench
    }
}

/// Output channels for the MNP–cavity system alone or with an emitter.
/// Zero-rate terms are omitted.
pub fn standard_channels(scenario: ChannelScenario, rates: &Rates) -> Vec<OutputChannel> {
    use ModeLabel::*;
    let mut rad1 = vec![(PlasmonDipole, rates.plasmon_radiative)];
    let mut channels = Vec::new();
    let mut ohmic = vec![(ChannelId::Ohm1, vec![(PlasmonDipole, rates.plasmon_ohmic)])];
    if scenario == ChannelScenario::WithEmitter {
        rad1.push((Emitter, rates.emitter_radiative));
        ohmic.push((ChannelId::Ohm2, vec![(Emitter, rates.emitter_quench)]));
    }
    let rad1_combine = if scenario == ChannelScenario::WithEmitter {
        Combine::Coherent
    } else {
        Combine::Incoherent
    };
    channels.push(OutputChannel {
        id: ChannelId::Rad1,
        kind: ChannelKind::Radiative,
        terms: rad1,
        combine: rad1_combine,
    });
    channels.push(OutputChannel {
        id: ChannelId::Rad2,
        kind: ChannelKind::Radiative,
        terms: vec![(Cavity, rates.cavity)],
        combine: Combine::Incoherent,
    });
    for (id, terms) in ohmic {
        channels.push(OutputChannel {
            id,
            kind: ChannelKind::Ohmic,
            terms,
            combine: Combine::Incoherent,
        });
    }
    for ch in &mut channels {
        ch.terms.retain(|(_, g)| g.0 > 0.0);
    }
    channels
}

/// One diagonal entry of the Hamiltonian with its dissipation breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeDescriptor {
    pub label: ModeLabel,
    /// Mode frequency minus the frame reference.
    pub detuning: Energy,
    pub decay: Vec<(ChannelId, Energy)>,
}

impl ModeDescriptor {
    pub fn total_width(&self) -> Energy {
        Energy(self.decay.iter().map(|(_, g)| g.0).sum())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveHamiltonian {
    pub basis: Vec<ModeLabel>,
    pub matrix: CMatrix,
    /// Mode whose frequency defines the rotating frame.
    pub reference: ModeLabel,
    pub modes: Vec<ModeDescriptor>,
    pub channels: Vec<OutputChannel>,
}

impl EffectiveHamiltonian {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, label: ModeLabel) -> Option<usize> {
        self.basis.iter().position(|&l| l == label)
    }

    /// Total widths γ_i in basis order.
    pub fn widths(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.total_width().0).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.matrix == self.matrix.transpose()
    }
}

/// Diagonal detunings and couplings in a common frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkParams {
    /// ω₁ − ω_ref
    pub plasmon_detuning: Energy,
    /// ω_c − ω_ref
    pub cavity_detuning: Energy,
    /// ω_e − ω_ref
    pub emitter_detuning: Energy,
    pub rates: Rates,
    pub couplings: CouplingSet,
}

/// Assembles the Hamiltonian on `basis` (a subset of plasmon, cavity,
/// emitter, in that order) in the frame of `reference`.
pub fn assemble(basis: &[ModeLabel], reference: ModeLabel, p: &NetworkParams) -> Result<EffectiveHamiltonian> {
    p.rates.validate()?;
    for (name, e) in [
        ("plasmon detuning", p.plasmon_detuning),
        ("cavity detuning", p.cavity_detuning),
        ("emitter detuning", p.emitter_detuning),
        ("plasmon-cavity coupling", p.couplings.plasmon_cavity),
        ("plasmon-emitter coupling", p.couplings.plasmon_emitter),
        ("cavity-emitter coupling", p.couplings.cavity_emitter),
    ] {
        ensure_finite(name, e.0)?;
    }
    if basis.is_empty() || basis.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("basis must be a non-empty ordered subset of (plasmon, cavity, emitter)".into()));
    }
    let scenario = if basis.contains(&ModeLabel::Emitter) {
        ChannelScenario::WithEmitter
    } else {
        ChannelScenario::MnpOnly
    };
    let mut channels = standard_channels(scenario, &p.rates);
    for ch in &mut channels {
        ch.terms.retain(|(m, _)| basis.contains(m));
    }
    channels.retain(|ch| !ch.terms.is_empty());

    let modes: Vec<ModeDescriptor> = basis
        .iter()
        .map(|&label| {
            let detuning = match label {
                ModeLabel::PlasmonDipole => p.plasmon_detuning,
                ModeLabel::Cavity => p.cavity_detuning,
                ModeLabel::Emitter => p.emitter_detuning,
            };
            let decay = channels
                .iter()
                .flat_map(|ch| ch.terms.iter().filter(|(m, _)| *m == label).map(move |(_, g)| (ch.id, *g)))
                .collect();
            ModeDescriptor { label, detuning, decay }
        })
        .collect();

    let n = basis.len();
    let mut matrix = CMatrix::zeros(n, n);
    for (i, m) in modes.iter().enumerate() {
        matrix[(i, i)] = c(m.detuning.0, -0.5 * m.total_width().0);
    }
    let coupling = |a: ModeLabel, b: ModeLabel| -> f64 {
        use ModeLabel::*;
        match (a, b) {
            (PlasmonDipole, Cavity) | (Cavity, PlasmonDipole) => p.couplings.plasmon_cavity.0,
            (PlasmonDipole, Emitter) | (Emitter, PlasmonDipole) => p.couplings.plasmon_emitter.0,
            (Cavity, Emitter) | (Emitter, Cavity) => p.couplings.cavity_emitter.0,
            _ => 0.0,
        }
    };
    for i in 0..n {
        for j in (i + 1)..n {
            let g = coupling(basis[i], basis[j]);
            matrix[(i, j)] = c(g, 0.0);
            matrix[(j, i)] = c(g, 0.0);
        }
    }
    Ok(EffectiveHamiltonian {
        basis: basis.to_vec(),
        matrix,
        reference,
        modes,
        channels,
    })
}

/// Plasmon, cavity and emitter in the emitter frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeModeParams {
    /// Δ_{1,e} = ω₁ − ω_e
    pub plasmon_detuning: Energy,
    /// Δ_{c,e} = ω_c − ω_e
    pub cavity_detuning: Energy,
    pub rates: Rates,
    pub couplings: CouplingSet,
}

impl ThreeModeParams {
    fn network(&self) -> NetworkParams {
        NetworkParams {
            plasmon_detuning: self.plasmon_detuning,
            cavity_detuning: self.cavity_detuning,
            emitter_detuning: Energy::ZERO,
            rates: self.rates,
            couplings: self.couplings,
        }
    }
}

pub fn build_three_mode(p: &ThreeModeParams) -> Result<EffectiveHamiltonian> {
    use ModeLabel::*;
    assemble(&[PlasmonDipole, Cavity, Emitter], Emitter, &p.network())
}

/// The same system with the cavity removed.
pub fn build_without_cavity(p: &ThreeModeParams) -> Result<EffectiveHamiltonian> {
    use ModeLabel::*;
    assemble(&[PlasmonDipole, Emitter], Emitter, &p.network())
}

/// Plasmon and cavity only, in the cavity frame. `plasmon_detuning` is
/// Δ_{1,c} = ω₁ − ω_c.
pub fn build_two_mode(plasmon_cavity: Energy, rates: &Rates, plasmon_detuning: Energy) -> Result<EffectiveHamiltonian> {
    use ModeLabel::*;
    let p = NetworkParams {
        plasmon_detuning,
        cavity_detuning: Energy::ZERO,
        emitter_detuning: Energy::ZERO,
        rates: *rates,
        couplings: CouplingSet {
            plasmon_cavity,
            ..CouplingSet::default()
        },
    };
    assemble(&[PlasmonDipole, Cavity], Cavity, &p)
}

/// The bare plasmon, frame at the (absent) cavity frequency.
pub fn build_bare_plasmon(rates: &Rates, plasmon_detuning: Energy) -> Result<EffectiveHamiltonian> {
    let p = NetworkParams {
        plasmon_detuning,
        cavity_detuning: Energy::ZERO,
        emitter_detuning: Energy::ZERO,
        rates: *rates,
        couplings: CouplingSet::default(),
    };
    assemble(&[ModeLabel::PlasmonDipole], ModeLabel::Cavity, &p)
}
