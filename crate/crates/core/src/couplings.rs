//! Coupling constants and decay rates derived from dipole moments and
//! geometry.
//!
//! All operations return magnitudes (or κ-signed dipole-dipole values);
//! the signs that enter the Hamiltonian are carried by [`CouplingSet`].

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::materials::{multipole_absorption_response, Environment, Nanoparticle, Shape};
use crate::quantities::{ensure_positive, wavevector, DipoleMoment, Energy, Length, COULOMB, HBAR_C};

/// Emitter dipole orientation relative to the line joining it to the
/// particle centre.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Radial,
    Tangential,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Radial => "radial",
            Orientation::Tangential => "tangential",
        }
    }

    /// Multipole weight `w_l`: `(l+1)²` radial, `l(l+1)/2` tangential.
    fn weight(self, l: u32) -> f64 {
        let l = l as f64;
        match self {
            Orientation::Radial => (l + 1.0) * (l + 1.0),
            Orientation::Tangential => 0.5 * l * (l + 1.0),
        }
    }
}

/// Relative placement of two point dipoles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DipoleGeometry {
    /// Both dipoles along the line of centres (κ = 2).
    Longitudinal,
    /// Both dipoles parallel, perpendicular to the line of centres (κ = −1).
    Transverse,
}

impl DipoleGeometry {
    pub fn kappa(self) -> f64 {
        match self {
            DipoleGeometry::Longitudinal => 2.0,
            DipoleGeometry::Transverse => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Emitter {
    pub mu: DipoleMoment,
    pub omega_e: Energy,
    /// Distance from the particle surface.
    pub distance: Length,
    pub orientation: Orientation,
    /// Free-space radiative rate.
    pub gamma_s: Energy,
    /// Non-radiative rate into the multipole plasmon bath.
    pub gamma_m: Energy,
}

impl Emitter {
    pub fn total_width(&self) -> Energy {
        self.gamma_s + self.gamma_m
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityMode {
    pub omega_c: Energy,
    pub q_factor: f64,
    /// Mode volume in nm³.
    pub volume: f64,
}

impl CavityMode {
    pub fn new(omega_c: Energy, q_factor: f64, volume: f64) -> Result<Self> {
        ensure_positive("omega_c", omega_c.0)?;
        ensure_positive("q_factor", q_factor)?;
        ensure_positive("mode volume", volume)?;
        Ok(Self { omega_c, q_factor, volume })
    }

    /// `γ_c = ω_c / Q`.
    pub fn gamma_c(&self) -> Energy {
        Energy(self.omega_c.0 / self.q_factor)
    }
}

/// Signed couplings of the three-mode network.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CouplingSet {
    /// Dipolar plasmon to cavity.
    pub plasmon_cavity: Energy,
    /// Dipolar plasmon to emitter.
    pub plasmon_emitter: Energy,
    /// Cavity to emitter.
    pub cavity_emitter: Energy,
}

impl CouplingSet {
    /// Builds a set from magnitudes and ±1 signs.
    pub fn from_magnitudes(magnitudes: [Energy; 3], signs: [f64; 3]) -> Self {
        let m = magnitudes;
        Self {
            plasmon_cavity: Energy(m[0].0.abs() * signs[0].signum()),
            plasmon_emitter: Energy(m[1].0.abs() * signs[1].signum()),
            cavity_emitter: Energy(m[2].0.abs() * signs[2].signum()),
        }
    }
}

/// Single-photon coupling of a dipole to a cavity mode,
/// `g = μ √(2π (e²/4πε₀) ω_c / (ε_b V_c))`.
pub fn vacuum_coupling(mu: DipoleMoment, omega_c: Energy, volume: f64, eps_b: f64) -> Result<Energy> {
    ensure_positive("mu", mu.0)?;
    ensure_positive("omega_c", omega_c.0)?;
    ensure_positive("mode volume", volume)?;
    ensure_positive("eps_b", eps_b)?;
    Ok(Energy(mu.0 * (2.0 * PI * COULOMB * omega_c.0 / (eps_b * volume)).sqrt()))
}

/// Effective dipole of a plasmon mode with radiative rate `gamma_rad`,
/// `μ₁² = 3πε₀ħc³ γ_rad / (2ω³)`.
pub fn plasmon_effective_dipole(gamma_rad: Energy, omega: Energy) -> Result<DipoleMoment> {
    ensure_positive("gamma_rad", gamma_rad.0)?;
    ensure_positive("omega", omega.0)?;
    Ok(DipoleMoment(
        (3.0 * HBAR_C.powi(3) * gamma_rad.0 / (8.0 * COULOMB * omega.0.powi(3))).sqrt(),
    ))
}

/// Near-field coupling of two point dipoles a centre distance `d` apart,
/// `κ μ_a μ_b (e²/4πε₀) / (ε_b d³)`.
pub fn dipole_dipole_coupling(
    mu_a: DipoleMoment,
    mu_b: DipoleMoment,
    d: Length,
    eps_b: f64,
    geometry: DipoleGeometry,
) -> Result<Energy> {
    let d = ensure_positive("dipole separation", d.0)?;
    ensure_positive("eps_b", eps_b)?;
    Ok(Energy(geometry.kappa() * mu_a.0 * mu_b.0 * COULOMB / (eps_b * d.powi(3))))
}

/// Spontaneous emission rate in a homogeneous medium,
/// `(4/3) k³ μ² (e²/4πε₀) / ε_b`.
pub fn free_space_decay(mu: DipoleMoment, omega: Energy, eps_b: f64) -> Result<Energy> {
    ensure_positive("mu", mu.0)?;
    let k = wavevector(omega, eps_b)?;
    Ok(Energy(4.0 / 3.0 * k.powi(3) * mu.0 * mu.0 * COULOMB / eps_b))
}

/// A truncated multipole quenching sum.
#[derive(Debug, Clone, PartialEq)]
pub struct QuenchSeries {
    pub rate: Energy,
    /// Highest multipole order retained.
    pub l_max: u32,
    /// Geometric estimate of the discarded tail.
    pub tail_estimate: Energy,
}

/// Energy transfer from the emitter into the l ≥ 2 modes of a sphere:
/// `γ_m = 2 (μ² e²/4πε₀ / ε_b) Σ_l w_l R^{2l+1} Im f_l(ω) / d^{2l+4}` with
/// `d = R + D`.
///
/// The sum stops once the last term is below 1e-4 of the running sum and
/// the geometric tail estimate is below 1e-3 of it.
pub fn multipole_quench_series(
    mu: DipoleMoment,
    orientation: Orientation,
    particle: &Nanoparticle,
    env: &Environment,
    distance: Length,
    omega: Energy,
) -> Result<QuenchSeries> {
    const L_CAP: u32 = 20_000;
    let radius = match particle.shape {
        Shape::Sphere { radius } => radius.0,
        Shape::Ellipsoid { .. } => {
            return Err(Error::Domain("multipole quenching is defined for spheres only".into()))
        }
    };
    ensure_positive("mu", mu.0)?;
    let d = radius + distance.0;
    if !(distance.0 > 0.0) || !d.is_finite() {
        return Err(Error::Domain(format!(
            "emitter at surface distance {} nm is not outside the particle",
            distance.0
        )));
    }
    let ratio = (radius / d).powi(2);
    let prefactor = 2.0 * mu.0 * mu.0 * COULOMB / env.eps_b;
    // Work with (R/d)^(2l+1) / d³ to avoid overflow of R^(2l+1).
    let scale = |l: u32| (radius / d).powi(2 * l as i32 + 1) / d.powi(3);
    let mut sum = 0.0;
    let mut prev_term = f64::NAN;
    for l in 2..=L_CAP {
        let f = multipole_absorption_response(&particle.metal, env, l, omega)?;
        let term = prefactor * orientation.weight(l) * scale(l) * f.im;
        sum += term;
        let rho = if prev_term.is_finite() && prev_term > 0.0 {
            (term / prev_term).max(ratio)
        } else {
            ratio
        };
        prev_term = term;
        let tail = if rho < 1.0 { term * rho / (1.0 - rho) } else { f64::INFINITY };
        if sum > 0.0 && term.abs() < 1e-4 * sum && tail.abs() < 1e-3 * sum {
            return Ok(QuenchSeries {
                rate: Energy(sum),
                l_max: l,
                tail_estimate: Energy(tail),
            });
        }
        if sum == 0.0 && term == 0.0 && l > 2 {
            // Lossless metal: nothing to absorb.
            return Ok(QuenchSeries {
                rate: Energy::ZERO,
                l_max: l,
                tail_estimate: Energy::ZERO,
            });
        }
    }
    Err(Error::Conditioning(format!(
        "multipole sum not converged by l = {L_CAP} (d/R = {})",
        d / radius
    )))
}

pub fn multipole_quench_rate(
    mu: DipoleMoment,
    orientation: Orientation,
    particle: &Nanoparticle,
    env: &Environment,
    distance: Length,
    omega: Energy,
) -> Result<Energy> {
    Ok(multipole_quench_series(mu, orientation, particle, env, distance, omega)?.rate)
}

/// Multipole quenching rescaled by one constant so that it reproduces a
/// reference rate at a reference distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibratedQuench {
    pub mu: DipoleMoment,
    pub orientation: Orientation,
    pub particle: Nanoparticle,
    pub env: Environment,
    pub omega: Energy,
    pub scale: f64,
}

impl CalibratedQuench {
    pub fn new(
        mu: DipoleMoment,
        orientation: Orientation,
        particle: Nanoparticle,
        env: Environment,
        omega: Energy,
        reference_distance: Length,
        reference_rate: Energy,
    ) -> Result<Self> {
        let raw = multipole_quench_rate(mu, orientation, &particle, &env, reference_distance, omega)?;
        if !(raw.0 > 0.0) {
            return Err(Error::Domain("cannot calibrate a vanishing quench rate".into()));
        }
        Ok(Self {
            mu,
            orientation,
            particle,
            env,
            omega,
            scale: reference_rate.0 / raw.0,
        })
    }

    pub fn rate(&self, distance: Length) -> Result<Energy> {
        let raw = multipole_quench_rate(self.mu, self.orientation, &self.particle, &self.env, distance, self.omega)?;
        Ok(raw * self.scale)
    }
}

/// Couplings of a tilted particle axis: `(G cos θ, g₁ sin θ)`.
pub fn project_couplings(plasmon_emitter: Energy, plasmon_cavity: Energy, theta_rad: f64) -> Result<(Energy, Energy)> {
    if !(0.0..=PI / 2.0 + 1e-12).contains(&theta_rad) {
        return Err(Error::Domain(format!("angle must lie in [0°, 90°], got {}°", theta_rad.to_degrees())));
    }
    Ok((plasmon_emitter * theta_rad.cos(), plasmon_cavity * theta_rad.sin()))
}
