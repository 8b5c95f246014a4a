use crate::dynamics::{
    count_oscillation_maxima, default_time_grid, doublet_separation, eigen_branches, emission_spectrum, evolve,
    fano_detuning, polariton_pair, quantum_yield, steady_state, BranchSummary, DriveSpec, EigenBranchSet,
    PolaritonPair, SpectrumResult, TimeTrace,
};
use crate::error::{Error, Result};
use crate::linalg::{c, eigen, CVector};
use crate::network::{ChannelId, EffectiveHamiltonian, ModeLabel};
use crate::numerics::linear_grid;
use crate::quantities::Energy;

use super::scenario::{Resolved, Scenario};

/// Threshold for counting oscillation maxima of the emitter population.
pub const MAXIMA_THRESHOLD: f64 = 1e-3;

/// Grid half-width in units of the relevant linewidth.
pub const WINDOW_LINEWIDTHS: f64 = 10.0;

/// The scenario's sweep window, or ±`auto_half_width` when it has none.
pub fn detuning_grid(scenario: &Scenario, auto_half_width: f64) -> Vec<f64> {
    let (lo, hi) = scenario
        .sweep
        .detuning
        .unwrap_or((-auto_half_width, auto_half_width));
    linear_grid(lo, hi, scenario.sweep.points)
}

/// Broadest linewidth among eigenmodes other than the most plasmon-like.
pub fn broadest_hybrid_width(h: &EffectiveHamiltonian) -> Result<f64> {
    let e = eigen(&h.matrix)?;
    let p = h.index_of(ModeLabel::PlasmonDipole);
    let mut idx: Vec<usize> = (0..e.values.len()).collect();
    if let Some(p) = p {
        idx.sort_by(|&a, &b| e.vectors[b][p].norm_sqr().total_cmp(&e.vectors[a][p].norm_sqr()));
        idx.remove(0);
    }
    Ok(idx.iter().map(|&i| -2.0 * e.values[i].im).fold(0.0, f64::max))
}

/// Plasmon driven from free space with and without the cavity.
#[derive(Debug, Clone)]
pub struct Fig1cResult {
    pub resolved: Resolved,
    /// Pump-cavity detuning Δ_{p,c}, eV.
    pub detunings: Vec<f64>,
    pub with_cavity: SpectrumResult,
    pub bare: SpectrumResult,
}

impl Fig1cResult {
    pub fn rad_cavity(&self) -> Vec<f64> {
        self.with_cavity.total_radiative()
    }

    pub fn rad_bare(&self) -> Vec<f64> {
        self.bare.total_radiative()
    }

    pub fn abs_cavity(&self) -> Vec<f64> {
        self.with_cavity.channel(ChannelId::Ohm1)
    }

    pub fn abs_bare(&self) -> Vec<f64> {
        self.bare.channel(ChannelId::Ohm1)
    }
}

/// Default Fig. 1(c) half-width: ten times `γ_c + 4g₁²/γ₁`, the width of
/// the cavity-dressed feature.
pub fn fig1c_half_width(r: &Resolved) -> f64 {
    let g1 = r.g1.value.0;
    WINDOW_LINEWIDTHS * (r.gamma_c.0 + 4.0 * g1 * g1 / r.rates().plasmon_total().0)
}

pub fn run_fig1c(scenario: &Scenario) -> Result<Fig1cResult> {
    if scenario.has_emitter() {
        return Err(Error::Domain("fig1c describes the particle and cavity without an emitter".into()));
    }
    let r = scenario.resolve()?;
    run_fig1c_resolved(scenario, r)
}

pub fn run_fig1c_resolved(scenario: &Scenario, r: Resolved) -> Result<Fig1cResult> {
    let detunings = detuning_grid(scenario, fig1c_half_width(&r));
    let with_cavity = emission_spectrum(&r.two_mode()?, ModeLabel::PlasmonDipole, &detunings)?;
    let bare = emission_spectrum(&r.bare_plasmon()?, ModeLabel::PlasmonDipole, &detunings)?;
    Ok(Fig1cResult {
        resolved: r,
        detunings,
        with_cavity,
        bare,
    })
}

/// Emitter driven with and without the cavity, swept in Δ_{p,c}.
#[derive(Debug, Clone)]
pub struct Fig2Result {
    pub resolved: Resolved,
    /// Pump-cavity detuning Δ_{p,c}, eV.
    pub detunings: Vec<f64>,
    pub with_cavity: SpectrumResult,
    pub bare: SpectrumResult,
    pub delta0: Energy,
}

/// Quantities evaluated exactly at the Fano detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanoPoint {
    pub eta_cavity: f64,
    pub eta_bare: f64,
    pub rad_cavity: f64,
    pub rad_bare: f64,
}

impl FanoPoint {
    pub fn yield_enhancement(&self) -> f64 {
        self.eta_cavity / self.eta_bare
    }

    pub fn power_enhancement(&self) -> f64 {
        self.rad_cavity / self.rad_bare
    }
}

/// Yields and radiated powers with and without the cavity at Δ_{p,c} = Δ₀.
pub fn fano_point(r: &Resolved) -> Result<FanoPoint> {
    let delta0 = fano_detuning(r.j.value, r.g1.value, r.big_g.value)?;
    let drive = DriveSpec::unit(ModeLabel::Emitter, delta0 + r.cavity_detuning);
    let with = steady_state(&r.three_mode()?, &drive)?;
    let bare = steady_state(&r.without_cavity()?, &drive)?;
    Ok(FanoPoint {
        eta_cavity: quantum_yield(&with)?,
        eta_bare: quantum_yield(&bare)?,
        rad_cavity: with.radiative(),
        rad_bare: bare.radiative(),
    })
}

impl Fig2Result {
    pub fn eta_cavity(&self) -> Result<Vec<f64>> {
        self.with_cavity.yields()
    }

    pub fn eta_bare(&self) -> Result<Vec<f64>> {
        self.bare.yields()
    }

    pub fn step(&self) -> f64 {
        if self.detunings.len() < 2 {
            0.0
        } else {
            self.detunings[1] - self.detunings[0]
        }
    }

    /// Grid detuning of the largest with-cavity yield.
    pub fn eta_argmax(&self) -> Result<f64> {
        let eta = self.eta_cavity()?;
        let i = (0..eta.len()).max_by(|&a, &b| eta[a].total_cmp(&eta[b])).expect("non-empty grid");
        Ok(self.detunings[i])
    }

    pub fn at_delta0(&self) -> Result<FanoPoint> {
        fano_point(&self.resolved)
    }
}

pub fn run_fig2(scenario: &Scenario) -> Result<Fig2Result> {
    if !scenario.has_emitter() {
        return Err(Error::Domain("fig2 needs an emitter".into()));
    }
    let r = scenario.resolve()?;
    let h = r.three_mode()?;
    let bare_h = r.without_cavity()?;
    let delta0 = fano_detuning(r.j.value, r.g1.value, r.big_g.value)?;
    let detunings = detuning_grid(scenario, WINDOW_LINEWIDTHS * broadest_hybrid_width(&h)?);
    let pump: Vec<f64> = detunings.iter().map(|d| d + r.cavity_detuning.0).collect();
    let mut with_cavity = emission_spectrum(&h, ModeLabel::Emitter, &pump)?;
    let mut bare = emission_spectrum(&bare_h, ModeLabel::Emitter, &pump)?;
    with_cavity.detunings = detunings.clone();
    bare.detunings = detunings.clone();
    Ok(Fig2Result {
        resolved: r,
        detunings,
        with_cavity,
        bare,
        delta0,
    })
}

/// Emitter population traces and the emission spectrum.
#[derive(Debug, Clone)]
pub struct Fig3Result {
    pub resolved: Resolved,
    /// `None` is the bare (no-cavity) trace.
    pub traces: Vec<(Option<f64>, TimeTrace)>,
    pub maxima: Vec<(Option<f64>, usize)>,
    /// Pump-emitter detuning, eV.
    pub detunings: Vec<f64>,
    pub spectrum: SpectrumResult,
    pub bare_spectrum: SpectrumResult,
    /// Separation of the two strongest peaks of the with-cavity spectrum.
    pub doublet: Option<f64>,
}

/// Anti-crossing analysis over Δ_{e,c}.
#[derive(Debug, Clone)]
pub struct Fig4Result {
    pub resolved: Resolved,
    pub branches: EigenBranchSet,
    pub summary: BranchSummary,
    pub at_resonance: PolaritonPair,
    /// Emission spectra at a few Δ_{e,c} values: (Δ_{e,c}, spectrum).
    pub spectra: Vec<(f64, SpectrumResult)>,
}

fn emitter_excited(h: &EffectiveHamiltonian) -> Result<CVector> {
    let i = h
        .index_of(ModeLabel::Emitter)
        .ok_or_else(|| Error::Domain("no emitter in the basis".into()))?;
    let mut v = CVector::zeros(h.dim());
    v[i] = c(1.0, 0.0);
    Ok(v)
}

/// Default half-width of emitter-driven sweeps.
pub fn default_spectral_half_width(r: &Resolved) -> f64 {
    // Ten times the largest coupling or emitter width, clamped to [1 meV, 0.1 eV].
    WINDOW_LINEWIDTHS * r.big_g.value.0.abs().max(r.g1.value.0.abs()).max(r.gamma_m.value.0).clamp(1e-3, 0.1)
}

pub fn run_fig3(scenario: &Scenario) -> Result<Fig3Result> {
    let r = scenario.resolve()?;
    run_fig3_resolved(scenario, r)
}

pub fn run_fig3_resolved(scenario: &Scenario, r: Resolved) -> Result<Fig3Result> {
    if !scenario.has_emitter() {
        return Err(Error::Domain("fig3 needs an emitter".into()));
    }
    let mut qs = scenario.run.trace_q.clone();
    if qs.is_empty() {
        return Err(Error::Domain("fig3 needs at least one trace Q".into()));
    }
    qs.sort_by(|a, b| b.total_cmp(a));
    // One grid for every trace, set by the slowest (highest-Q) system.
    let slowest = r.with_q(qs[0])?.three_mode()?;
    let times = default_time_grid(&slowest, scenario.run.time_spans, scenario.run.time_points)?;
    let mut traces = Vec::new();
    for &q in &scenario.run.trace_q {
        let h = r.with_q(q)?.three_mode()?;
        traces.push((Some(q), evolve(&h, &emitter_excited(&h)?, &times)?));
    }
    let bare = r.without_cavity()?;
    traces.push((None, evolve(&bare, &emitter_excited(&bare)?, &times)?));
    let maxima = traces
        .iter()
        .map(|(q, t)| {
            let pop = t.population(ModeLabel::Emitter).expect("emitter trace");
            (*q, count_oscillation_maxima(pop, MAXIMA_THRESHOLD))
        })
        .collect();

    let detunings = detuning_grid(scenario, default_spectral_half_width(&r));
    let spectrum = emission_spectrum(&r.three_mode()?, ModeLabel::Emitter, &detunings)?;
    let bare_spectrum = emission_spectrum(&bare, ModeLabel::Emitter, &detunings)?;
    let doublet = doublet_separation(&detunings, &spectrum.total_radiative());
    Ok(Fig3Result {
        resolved: r,
        traces,
        maxima,
        detunings,
        spectrum,
        bare_spectrum,
        doublet,
    })
}

/// Number of Δ_{e,c} values at which Fig. 4 spectra are computed.
pub const FIG4_SPECTRA: usize = 11;

pub fn run_fig4(scenario: &Scenario) -> Result<Fig4Result> {
    let r = scenario.resolve()?;
    run_fig4_resolved(scenario, r)
}

/// Three-mode Hamiltonian at emitter-cavity detuning Δ_{e,c} = ω_e − ω_c.
pub fn at_emitter_cavity_detuning(r: &Resolved, delta_ec: f64) -> Result<EffectiveHamiltonian> {
    let mut p = r.three_mode_params();
    p.cavity_detuning = Energy(-delta_ec);
    crate::network::build_three_mode(&p)
}

pub fn run_fig4_resolved(scenario: &Scenario, r: Resolved) -> Result<Fig4Result> {
    if !scenario.has_emitter() {
        return Err(Error::Domain("fig4 needs an emitter".into()));
    }
    let sweep = detuning_grid(scenario, default_spectral_half_width(&r));
    let branches = eigen_branches(|x| at_emitter_cavity_detuning(&r, x), &sweep)?;
    let summary = branches.summary()?;
    let at_resonance = polariton_pair(&at_emitter_cavity_detuning(&r, 0.0)?)?;
    let (lo, hi) = (sweep[0], sweep[sweep.len() - 1]);
    let mut spectra = Vec::with_capacity(FIG4_SPECTRA);
    for dec in linear_grid(lo, hi, FIG4_SPECTRA) {
        let h = at_emitter_cavity_detuning(&r, dec)?;
        spectra.push((dec, emission_spectrum(&h, ModeLabel::Emitter, &sweep)?));
    }
    Ok(Fig4Result {
        resolved: r,
        branches,
        summary,
        at_resonance,
        spectra,
    })
}

/// Both figures from a single resolution (and calibration).
pub fn run_fig3_fig4(scenario: &Scenario) -> Result<(Fig3Result, Fig4Result)> {
    let r = scenario.resolve()?;
    Ok((run_fig3_resolved(scenario, r.clone())?, run_fig4_resolved(scenario, r)?))
}
