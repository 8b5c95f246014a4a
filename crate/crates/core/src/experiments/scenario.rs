use std::fmt;

use crate::couplings::{
    dipole_dipole_coupling, free_space_decay, multipole_quench_rate, project_couplings, vacuum_coupling,
    CalibratedQuench, CouplingSet, DipoleGeometry, Orientation,
};
use crate::error::{Error, Result};
use crate::materials::{dipolar_mode, DrudeMetal, Environment, Nanoparticle, Shape};
use crate::network::{
    build_bare_plasmon, build_three_mode, build_two_mode, build_without_cavity, EffectiveHamiltonian, ModeLabel, Rates,
    ThreeModeParams,
};
use crate::quantities::{DipoleMoment, Energy, Length};

use super::calibration::{calibrate_centered, calibrate_fig3_couplings, CalibrationTargets};

/// Nanometres in one micrometre, cubed.
pub const NM3_PER_UM3: f64 = 1e9;

/// Where a resolved number came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    FirstPrinciples,
    PaperExact,
    Calibrated,
    Override,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::FirstPrinciples => "first_principles",
            Provenance::PaperExact => "paper_exact",
            Provenance::Calibrated => "calibrated",
            Provenance::Override => "override",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How the couplings and emitter rates of a scenario are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingMode {
    FirstPrinciples,
    PaperExact,
    Calibrated,
}

impl CouplingMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CouplingMode::FirstPrinciples => "first_principles",
            CouplingMode::PaperExact => "paper_exact",
            CouplingMode::Calibrated => "calibrated",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "first_principles" => Some(CouplingMode::FirstPrinciples),
            "paper_exact" => Some(CouplingMode::PaperExact),
            "calibrated" => Some(CouplingMode::Calibrated),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitterSpec {
    pub mu: DipoleMoment,
    /// Distance from the particle surface along the long axis.
    pub distance: Length,
    pub orientation: Orientation,
    /// Angle between the emitter dipole and the particle long axis; when set,
    /// G and g₁ are projected onto it.
    pub theta_deg: Option<f64>,
    /// Δ_{1,e} = ω₁ − ω_e.
    pub plasmon_detuning: Energy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavitySpec {
    pub q_factor: f64,
    pub volume_um3: f64,
    /// ω_c minus the emitter frequency, or minus the plasmon frequency when
    /// there is no emitter.
    pub detuning: Energy,
}

/// Explicit values that replace computed ones. Signs are taken as written.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Overrides {
    pub g1: Option<Energy>,
    pub big_g: Option<Energy>,
    pub j: Option<Energy>,
    pub gamma_s: Option<Energy>,
    pub gamma_m: Option<Energy>,
    pub gamma_r: Option<Energy>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuenchReference {
    pub distance: Length,
    pub rate: Energy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSpec {
    pub mode: CouplingMode,
    /// Signs applied to computed magnitudes of (g₁, G, J).
    pub signs: [f64; 3],
    pub overrides: Overrides,
    /// Rescales the multipole quenching sum to hit this rate at this distance.
    pub quench_reference: Option<QuenchReference>,
    pub targets: Option<CalibrationTargets>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Pump (or eigen-sweep) detuning window in eV; automatic when absent.
    pub detuning: Option<(f64, f64)>,
    pub points: usize,
    pub distance_nm: (f64, f64),
    pub distance_points: usize,
    pub q: (f64, f64),
    pub q_points: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            detuning: None,
            points: 2001,
            distance_nm: (2.0, 30.0),
            distance_points: 61,
            q: (1e2, 1e7),
            q_points: 61,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub drive: ModeLabel,
    pub time_points: usize,
    /// Trace length in units of the slowest decay time.
    pub time_spans: f64,
    /// Cavity Q values for time traces.
    pub trace_q: Vec<f64>,
}

/// A fully specified, validated simulation input.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub metal: DrudeMetal,
    pub environment: Environment,
    pub particle: Nanoparticle,
    pub emitter: Option<EmitterSpec>,
    pub cavity: CavitySpec,
    pub couplings: CouplingSpec,
    pub sweep: SweepSpec,
    pub run: RunSpec,
}

/// A number together with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sourced {
    pub value: Energy,
    pub provenance: Provenance,
}

impl Sourced {
    pub fn new(value: Energy, provenance: Provenance) -> Self {
        Self { value, provenance }
    }
}

/// Every number that enters the Hamiltonian, with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub omega_plasmon: Energy,
    pub omega_emitter: Option<Energy>,
    pub omega_cavity: Energy,
    pub mu_plasmon: DipoleMoment,
    pub gamma_rad: Sourced,
    pub gamma_ohmic: Energy,
    pub gamma_c: Energy,
    pub gamma_s: Sourced,
    pub gamma_m: Sourced,
    pub g1: Sourced,
    pub big_g: Sourced,
    pub j: Sourced,
    /// Δ_{1,e} (or Δ_{1,c} without an emitter).
    pub plasmon_detuning: Energy,
    /// Δ_{c,e} (zero without an emitter).
    pub cavity_detuning: Energy,
    /// Diagnostics that do not enter the model (e.g. point-dipole estimates).
    pub diagnostics: Vec<(String, f64)>,
}

impl Resolved {
    pub fn rates(&self) -> Rates {
        Rates {
            plasmon_radiative: self.gamma_rad.value,
            plasmon_ohmic: self.gamma_ohmic,
            cavity: self.gamma_c,
            emitter_radiative: self.gamma_s.value,
            emitter_quench: self.gamma_m.value,
        }
    }

    pub fn couplings(&self) -> CouplingSet {
        CouplingSet {
            plasmon_cavity: self.g1.value,
            plasmon_emitter: self.big_g.value,
            cavity_emitter: self.j.value,
        }
    }

    pub fn three_mode_params(&self) -> ThreeModeParams {
        ThreeModeParams {
            plasmon_detuning: self.plasmon_detuning,
            cavity_detuning: self.cavity_detuning,
            rates: self.rates(),
            couplings: self.couplings(),
        }
    }

    pub fn three_mode(&self) -> Result<EffectiveHamiltonian> {
        build_three_mode(&self.three_mode_params())
    }

    pub fn without_cavity(&self) -> Result<EffectiveHamiltonian> {
        build_without_cavity(&self.three_mode_params())
    }

    /// Plasmon and cavity only, cavity frame.
    pub fn two_mode(&self) -> Result<EffectiveHamiltonian> {
        build_two_mode(self.g1.value, &self.rates(), self.plasmon_detuning)
    }

    pub fn bare_plasmon(&self) -> Result<EffectiveHamiltonian> {
        build_bare_plasmon(&self.rates(), self.plasmon_detuning)
    }

    /// Same system with a different cavity Q (γ_c = ω_c/Q).
    pub fn with_q(&self, q: f64) -> Result<Resolved> {
        crate::quantities::ensure_positive("q_factor", q)?;
        let mut r = self.clone();
        r.gamma_c = Energy(self.omega_cavity.0 / q);
        Ok(r)
    }

    /// (name, value in eV, provenance) for every resolved parameter.
    pub fn parameter_table(&self) -> Vec<(&'static str, f64, Provenance)> {
        use Provenance::FirstPrinciples as Fp;
        let mut rows = vec![
            ("omega_plasmon_ev", self.omega_plasmon.0, Fp),
            ("omega_cavity_ev", self.omega_cavity.0, Fp),
        ];
        if let Some(w) = self.omega_emitter {
            rows.push(("omega_emitter_ev", w.0, Fp));
        }
        rows.extend([
            ("mu_plasmon_nm", self.mu_plasmon.0, Fp),
            ("gamma_r_ev", self.gamma_rad.value.0, self.gamma_rad.provenance),
            ("gamma_o_ev", self.gamma_ohmic.0, Fp),
            ("gamma_c_ev", self.gamma_c.0, Fp),
            ("gamma_s_ev", self.gamma_s.value.0, self.gamma_s.provenance),
            ("gamma_m_ev", self.gamma_m.value.0, self.gamma_m.provenance),
            ("g1_ev", self.g1.value.0, self.g1.provenance),
            ("G_ev", self.big_g.value.0, self.big_g.provenance),
            ("J_ev", self.j.value.0, self.j.provenance),
            ("plasmon_detuning_ev", self.plasmon_detuning.0, Fp),
            ("cavity_detuning_ev", self.cavity_detuning.0, Fp),
        ]);
        rows
    }
}

impl Scenario {
    pub fn has_emitter(&self) -> bool {
        self.emitter.is_some()
    }

    /// Resolves every Hamiltonian entry. Calibrated scenarios run the
    /// coupling calibration here.
    pub fn resolve(&self) -> Result<Resolved> {
        let env = self.environment;
        let mode = dipolar_mode(&self.particle, &env)?;
        let cs = &self.couplings;
        let ov = cs.overrides;
        let paper = cs.mode == CouplingMode::PaperExact;
        let explicit = if paper { Provenance::PaperExact } else { Provenance::Override };
        let pick = |computed: Energy, given: Option<Energy>, computed_source: Provenance| match given {
            Some(v) => Sourced::new(v, explicit),
            None => Sourced::new(computed, computed_source),
        };
        if paper {
            let mut missing = Vec::new();
            let mut need = |name: &str, v: Option<Energy>| {
                if v.is_none() {
                    missing.push(name.to_string());
                }
            };
            need("g1_mev", ov.g1);
            need("gamma_r_mev", ov.gamma_r);
            if self.has_emitter() {
                need("G_mev", ov.big_g);
                need("J_uev", ov.j);
                need("gamma_s_uev", ov.gamma_s);
                need("gamma_m_uev", ov.gamma_m);
            }
            if !missing.is_empty() {
                return Err(Error::Domain(format!(
                    "paper_exact couplings need explicit values for: {}",
                    missing.join(", ")
                )));
            }
        }
        let gamma_rad = pick(mode.gamma_rad, ov.gamma_r, Provenance::FirstPrinciples);
        // The effective dipole follows the radiative rate actually used.
        let mu_plasmon = crate::couplings::plasmon_effective_dipole(gamma_rad.value, mode.omega)?;
        let sign = |i: usize, m: Energy| Energy(m.0.abs() * cs.signs[i].signum());
        let volume = self.cavity.volume_um3 * NM3_PER_UM3;
        let mut diagnostics = Vec::new();

        let Some(em) = self.emitter else {
            let omega_cavity = mode.omega + self.cavity.detuning;
            let g1_fp = sign(0, vacuum_coupling(mu_plasmon, omega_cavity, volume, env.eps_b)?);
            let zero = Sourced::new(Energy::ZERO, Provenance::FirstPrinciples);
            return Ok(Resolved {
                omega_plasmon: mode.omega,
                omega_emitter: None,
                omega_cavity,
                mu_plasmon,
                gamma_rad,
                gamma_ohmic: mode.gamma_ohmic,
                gamma_c: Energy(omega_cavity.0 / self.cavity.q_factor),
                gamma_s: zero,
                gamma_m: zero,
                g1: pick(g1_fp, ov.g1, Provenance::FirstPrinciples),
                big_g: zero,
                j: zero,
                plasmon_detuning: -self.cavity.detuning,
                cavity_detuning: Energy::ZERO,
                diagnostics,
            });
        };

        let omega_emitter = mode.omega - em.plasmon_detuning;
        crate::quantities::ensure_positive("emitter frequency", omega_emitter.0)?;
        let omega_cavity = omega_emitter + self.cavity.detuning;
        crate::quantities::ensure_positive("cavity frequency", omega_cavity.0)?;
        let gamma_c = Energy(omega_cavity.0 / self.cavity.q_factor);
        let geometry = match em.orientation {
            Orientation::Radial => DipoleGeometry::Longitudinal,
            Orientation::Tangential => DipoleGeometry::Transverse,
        };
        let d = Length(self.particle.extent() + em.distance.0);
        let mut g_fp = Energy(
            dipole_dipole_coupling(mu_plasmon, em.mu, d, env.eps_b, geometry)?.0.abs(),
        );
        let mut g1_fp = vacuum_coupling(mu_plasmon, omega_cavity, volume, env.eps_b)?;
        let j_fp = vacuum_coupling(em.mu, omega_cavity, volume, env.eps_b)?;
        if let Some(theta) = em.theta_deg {
            (g_fp, g1_fp) = project_couplings(g_fp, g1_fp, theta.to_radians())?;
        }
        let (g_fp, g1_fp, j_fp) = (sign(1, g_fp), sign(0, g1_fp), sign(2, j_fp));
        let gamma_s = pick(free_space_decay(em.mu, omega_emitter, env.eps_b)?, ov.gamma_s, Provenance::FirstPrinciples);

        let quench = |omega: Energy| -> Result<Sourced> {
            if let Some(v) = ov.gamma_m {
                return Ok(Sourced::new(v, explicit));
            }
            match (cs.quench_reference, self.particle.shape) {
                (Some(r), Shape::Sphere { .. }) => {
                    let cq = CalibratedQuench::new(em.mu, em.orientation, self.particle, env, omega, r.distance, r.rate)?;
                    Ok(Sourced::new(cq.rate(em.distance)?, Provenance::Calibrated))
                }
                (None, Shape::Sphere { .. }) => Ok(Sourced::new(
                    multipole_quench_rate(em.mu, em.orientation, &self.particle, &env, em.distance, omega)?,
                    Provenance::FirstPrinciples,
                )),
                (_, Shape::Ellipsoid { .. }) => Err(Error::Domain(
                    "the multipole quenching rate of an ellipsoid must be given (gamma_m_uev) or calibrated".into(),
                )),
            }
        };

        let mut resolved = Resolved {
            omega_plasmon: mode.omega,
            omega_emitter: Some(omega_emitter),
            omega_cavity,
            mu_plasmon,
            gamma_rad,
            gamma_ohmic: mode.gamma_ohmic,
            gamma_c,
            gamma_s,
            gamma_m: Sourced::new(Energy::ZERO, Provenance::FirstPrinciples),
            g1: pick(g1_fp, ov.g1, Provenance::FirstPrinciples),
            big_g: pick(g_fp, ov.big_g, Provenance::FirstPrinciples),
            j: pick(j_fp, ov.j, Provenance::FirstPrinciples),
            plasmon_detuning: em.plasmon_detuning,
            cavity_detuning: self.cavity.detuning,
            diagnostics: Vec::new(),
        };

        if cs.mode != CouplingMode::Calibrated {
            resolved.gamma_m = quench(omega_emitter)?;
            resolved.diagnostics = diagnostics;
            return Ok(resolved);
        }

        let targets = cs
            .targets
            .ok_or_else(|| Error::Domain("calibrated couplings need target_splitting_mev and target_kappa_mev".into()))?;
        resolved.j = Sourced::new(ov.j.unwrap_or(Energy::ZERO), if ov.j.is_some() { explicit } else { Provenance::Calibrated });
        let signs = [cs.signs[0], cs.signs[1]];
        let calibrated = match ov.gamma_m {
            Some(_) => {
                resolved.gamma_m = quench(omega_emitter)?;
                calibrate_fig3_couplings(&resolved, &targets, signs)?
            }
            None => {
                let (set, gamma_m) = calibrate_centered(&resolved, &targets, signs)?;
                resolved.gamma_m = Sourced::new(gamma_m, Provenance::Calibrated);
                set
            }
        };
        resolved.g1 = Sourced::new(calibrated.plasmon_cavity, Provenance::Calibrated);
        resolved.big_g = Sourced::new(calibrated.plasmon_emitter, Provenance::Calibrated);
        diagnostics.push(("point_dipole_g1_ev".into(), g1_fp.0));
        diagnostics.push(("point_dipole_G_ev".into(), g_fp.0));
        diagnostics.push(("g1_calibrated_over_estimate".into(), calibrated.plasmon_cavity.0.abs() / g1_fp.0.abs()));
        diagnostics.push(("G_calibrated_over_estimate".into(), calibrated.plasmon_emitter.0.abs() / g_fp.0.abs()));
        resolved.diagnostics = diagnostics;
        Ok(resolved)
    }
}
