//! Drude metal response and the quasi-static plasmon modes of spheres and
//! ellipsoids.
//!
//! Each localized plasmon resonance is reduced to a single damped oscillator
//! (resonance, full width, residue). The resonance is the zero of the real
//! part of the quasi-static denominator with damping dropped; damping only
//! enters the width, which for a Drude metal is exactly `γ_o`.

use num_complex::Complex64;

use crate::couplings::plasmon_effective_dipole;
use crate::error::{Error, Result};
use crate::numerics;
use crate::quantities::{ensure_finite, ensure_non_negative, ensure_positive, DipoleMoment, Energy, Length, HBAR_C};

/// Spheres larger than this are outside the quasi-static regime.
pub const QUASI_STATIC_MAX_NM: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeMetal {
    pub eps_inf: f64,
    pub omega_p: Energy,
    pub gamma_o: Energy,
}

impl DrudeMetal {
    pub fn new(eps_inf: f64, omega_p: Energy, gamma_o: Energy) -> Result<Self> {
        ensure_finite("eps_inf", eps_inf)?;
        if eps_inf < 1.0 {
            return Err(Error::Domain(format!("eps_inf must be >= 1, got {eps_inf}")));
        }
        ensure_positive("omega_p", omega_p.0)?;
        ensure_non_negative("gamma_o", gamma_o.0)?;
        Ok(Self { eps_inf, omega_p, gamma_o })
    }

    /// Gold: ε_∞ = 1, ω_p = 4 eV, γ_o = 0.2 eV.
    pub fn gold() -> Self {
        Self {
            eps_inf: 1.0,
            omega_p: Energy::ev(4.0),
            gamma_o: Energy::ev(0.2),
        }
    }

    pub fn lossless(self) -> Self {
        Self { gamma_o: Energy::ZERO, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Environment {
    pub eps_b: f64,
}

impl Environment {
    pub fn new(eps_b: f64) -> Result<Self> {
        ensure_finite("eps_b", eps_b)?;
        if eps_b < 1.0 {
            return Err(Error::Domain(format!("eps_b must be >= 1, got {eps_b}")));
        }
        Ok(Self { eps_b })
    }

    pub fn vacuum() -> Self {
        Self { eps_b: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Sphere { radius: Length },
    Ellipsoid { semi_axes: [Length; 3] },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nanoparticle {
    pub shape: Shape,
    pub metal: DrudeMetal,
}

impl Nanoparticle {
    pub fn sphere(radius: Length, metal: DrudeMetal) -> Result<Self> {
        ensure_positive("radius", radius.0)?;
        Ok(Self {
            shape: Shape::Sphere { radius },
            metal,
        })
    }

    pub fn ellipsoid(semi_axes: [Length; 3], metal: DrudeMetal) -> Result<Self> {
        for a in semi_axes {
            ensure_positive("semi-axis", a.0)?;
        }
        Ok(Self {
            shape: Shape::Ellipsoid { semi_axes },
            metal,
        })
    }

    pub fn semi_axes(&self) -> [f64; 3] {
        match self.shape {
            Shape::Sphere { radius } => [radius.0; 3],
            Shape::Ellipsoid { semi_axes } => semi_axes.map(|a| a.0),
        }
    }

    /// Index of the longest semi-axis (first one on ties).
    pub fn long_axis(&self) -> usize {
        let axes = self.semi_axes();
        let mut best = 0;
        for q in 1..3 {
            if axes[q] > axes[best] {
                best = q;
            }
        }
        best
    }

    /// Semi-axis length along the long axis; the sphere radius for spheres.
    pub fn extent(&self) -> f64 {
        self.semi_axes()[self.long_axis()]
    }

    /// False for spheres whose radius exceeds [`QUASI_STATIC_MAX_NM`].
    pub fn is_quasi_static(&self) -> bool {
        match self.shape {
            Shape::Sphere { radius } => radius.0 <= QUASI_STATIC_MAX_NM,
            Shape::Ellipsoid { .. } => true,
        }
    }

    pub fn warnings(&self) -> Vec<String> {
        if self.is_quasi_static() {
            Vec::new()
        } else {
            vec![format!(
                "sphere radius {} nm exceeds the quasi-static limit of {QUASI_STATIC_MAX_NM} nm",
                self.extent()
            )]
        }
    }

    /// Depolarization factor along `axis` (1/3 for spheres).
    pub fn depolarization(&self, axis: usize) -> Result<f64> {
        match self.shape {
            Shape::Sphere { .. } => Ok(1.0 / 3.0),
            Shape::Ellipsoid { semi_axes } => Ok(depolarization_factors(semi_axes)?[axis]),
        }
    }
}

/// One localized plasmon mode reduced to a damped oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlasmonMode {
    /// Multipole order (1 = dipolar).
    pub order: u32,
    /// Principal axis index, 0-based.
    pub axis: usize,
    pub omega: Energy,
    pub gamma_rad: Energy,
    pub gamma_ohmic: Energy,
    pub mu_eff: DipoleMoment,
}

impl PlasmonMode {
    pub fn total_width(&self) -> Energy {
        self.gamma_rad + self.gamma_ohmic
    }
}

/// `ε_∞ − ω_p²/(ω² + iωγ_o)`.
pub fn drude_permittivity(metal: &DrudeMetal, omega: Energy) -> Result<Complex64> {
    let w = ensure_positive("omega", omega.0)?;
    let wp = metal.omega_p.0;
    Ok(Complex64::new(metal.eps_inf, 0.0) - wp * wp / Complex64::new(w * w, w * metal.gamma_o.0))
}

/// Resonance of the order-`l` sphere mode: `Re ε_m(ω_l) = −ε_b (l+1)/l`.
pub fn sphere_mode_frequency(metal: &DrudeMetal, env: &Environment, l: u32) -> Result<Energy> {
    if l < 1 {
        return Err(Error::Domain("multipole order must be >= 1".into()));
    }
    let l = l as f64;
    Ok(Energy(metal.omega_p.0 / (metal.eps_inf + env.eps_b * (l + 1.0) / l).sqrt()))
}

/// Dipolar resonance along an ellipsoid axis with depolarization factor `l_q`.
pub fn ellipsoid_mode_frequency(metal: &DrudeMetal, env: &Environment, l_q: f64) -> Result<Energy> {
    if !(l_q > 0.0 && l_q < 1.0) {
        return Err(Error::Domain(format!("depolarization factor must lie in (0,1), got {l_q}")));
    }
    Ok(Energy(
        metal.omega_p.0 / (metal.eps_inf + env.eps_b * (1.0 / l_q - 1.0)).sqrt(),
    ))
}

/// Depolarization factors `(L1, L2, L3)` of an ellipsoid.
///
/// Evaluates `L_q = (a1 a2 a3 / 2) ∫₀^∞ ds / ((s + a_q²) √Π(s + a_i²))` after
/// mapping `s = m²(1/τ² − 1)` (m = largest semi-axis) onto `τ ∈ (0, 1]`,
/// where the integrand is smooth.
pub fn depolarization_factors(semi_axes: [Length; 3]) -> Result<[f64; 3]> {
    let a = semi_axes.map(|x| x.0);
    for &x in &a {
        ensure_positive("semi-axis", x)?;
    }
    let m = a.iter().cloned().fold(f64::MIN, f64::max);
    let m2 = m * m;
    let a2 = a.map(|x| x * x);
    let volume = a[0] * a[1] * a[2];
    let mut factors = [0.0; 3];
    for q in 0..3 {
        let integrand = |t: f64| {
            let t2 = t * t;
            // m² − τ²(m² − a_i²) without cancellation near τ = 1.
            let base = m2 * (1.0 - t) * (1.0 + t);
            let e = a2.map(|x| base + t2 * x);
            2.0 * m2 * t2 / (e[q] * (e[0] * e[1] * e[2]).sqrt())
        };
        factors[q] = 0.5 * volume * numerics::integrate(integrand, 0.0, 1.0, 1e-12, 0.0)?;
    }
    Ok(factors)
}

/// A response function with a single isolated resonance, exposed as
/// numerator/denominator so it can be reduced to a Lorentzian.
pub trait Resonance {
    fn numerator(&self, omega: f64) -> Complex64;

    /// Denominator whose real part is damping-free and whose imaginary part
    /// is first order in the damping.
    fn denominator(&self, omega: f64) -> Complex64;

    /// The full response. Defaults to numerator/denominator.
    fn value(&self, omega: f64) -> Complex64 {
        self.numerator(omega) / self.denominator(omega)
    }
}

/// Quasi-static polarizability (in units of 4πε₀, nm³) of an ellipsoid
/// along one principal axis:
/// `α = (a1 a2 a3 / 3)(ε_m − ε_b)/(ε_b + L(ε_m − ε_b))`.
#[derive(Debug, Clone, Copy)]
pub struct QuasiStaticPolarizability {
    pub metal: DrudeMetal,
    pub eps_b: f64,
    pub volume_factor: f64,
    pub depolarization: f64,
}

impl QuasiStaticPolarizability {
    pub fn along(particle: &Nanoparticle, env: &Environment, axis: usize) -> Result<Self> {
        let a = particle.semi_axes();
        Ok(Self {
            metal: particle.metal,
            eps_b: env.eps_b,
            volume_factor: a[0] * a[1] * a[2] / 3.0,
            depolarization: particle.depolarization(axis)?,
        })
    }

    /// `ω² + iωγ`, the factor that clears the Drude pole.
    fn drude_factor(&self, omega: f64) -> Complex64 {
        Complex64::new(omega * omega, omega * self.metal.gamma_o.0)
    }
}

/// Numerator and denominator are the polarizability multiplied through by
/// `ω² + iωγ`, so the ratio is exact while `Re D` is free of damping.
impl Resonance for QuasiStaticPolarizability {
    fn numerator(&self, omega: f64) -> Complex64 {
        let wp2 = self.metal.omega_p.0 * self.metal.omega_p.0;
        self.volume_factor * ((self.metal.eps_inf - self.eps_b) * self.drude_factor(omega) - wp2)
    }

    fn denominator(&self, omega: f64) -> Complex64 {
        let wp2 = self.metal.omega_p.0 * self.metal.omega_p.0;
        let l = self.depolarization;
        (self.eps_b + l * (self.metal.eps_inf - self.eps_b)) * self.drude_factor(omega) - l * wp2
    }
}

/// `A / (ω_res − ω − iγ/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lorentzian {
    pub omega_res: Energy,
    pub width: Energy,
    pub residue: Complex64,
}

impl Lorentzian {
    pub fn eval(&self, omega: f64) -> Complex64 {
        self.residue / Complex64::new(self.omega_res.0 - omega, -0.5 * self.width.0)
    }
}

impl Resonance for Lorentzian {
    fn numerator(&self, _omega: f64) -> Complex64 {
        self.residue
    }

    fn denominator(&self, omega: f64) -> Complex64 {
        Complex64::new(self.omega_res.0 - omega, -0.5 * self.width.0)
    }
}

/// Reduce a single-resonance response to Lorentzian oscillator parameters.
///
/// The resonance is the unique sign change of `Re D(ω)` in `window`; the
/// width is `2 Im D / (d Re D/dω)` at that point and the residue
/// `−N / (d Re D/dω)`.
pub fn lorentzian_reduction<R: Resonance + ?Sized>(response: &R, window: (Energy, Energy)) -> Result<Lorentzian> {
    const SCAN: usize = 4000;
    let (lo, hi) = (window.0 .0, window.1 .0);
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Domain(format!("invalid scan window [{lo}, {hi}]")));
    }
    let re_d = |w: f64| response.denominator(w).re;
    let grid = numerics::linear_grid(lo, hi, SCAN + 1);
    let mut brackets = Vec::new();
    let mut prev = re_d(grid[0]);
    for pair in grid.windows(2) {
        let next = re_d(pair[1]);
        if prev == 0.0 || prev.signum() != next.signum() && next != 0.0 {
            brackets.push((pair[0], pair[1]));
        }
        prev = next;
    }
    if brackets.len() != 1 {
        return Err(Error::ResonanceCount {
            lo,
            hi,
            found: brackets.len(),
        });
    }
    let (a, b) = brackets[0];
    let omega_res = numerics::find_root(re_d, a, b, 1e-15 * hi.abs().max(1.0))?;
    let h = 1e-6 * omega_res.abs().max(1e-9);
    let slope = (re_d(omega_res + h) - re_d(omega_res - h)) / (2.0 * h);
    let width = 2.0 * response.denominator(omega_res).im / slope;
    let residue = -response.numerator(omega_res) / slope;
    Ok(Lorentzian {
        omega_res: Energy(omega_res),
        width: Energy(width),
        residue,
    })
}

/// Radiative rate of the dipolar mode along `axis`:
/// `γ_r = (2/9) ε_b a1 a2 a3 ω₁⁶ / (L² ω_p² (ħc)³)`.
pub fn dipolar_radiative_rate_along(particle: &Nanoparticle, env: &Environment, axis: usize) -> Result<Energy> {
    let l_q = particle.depolarization(axis)?;
    let a = particle.semi_axes();
    let volume = a[0] * a[1] * a[2];
    let w1 = dipole_frequency(particle, env, l_q)?.0;
    let wp = particle.metal.omega_p.0;
    Ok(Energy(
        (2.0 / 9.0) * env.eps_b * volume * w1.powi(6) / (l_q * l_q * wp * wp * HBAR_C.powi(3)),
    ))
}

/// Radiative rate of the dipolar mode along the particle's long axis.
pub fn dipolar_radiative_rate(particle: &Nanoparticle, env: &Environment) -> Result<Energy> {
    dipolar_radiative_rate_along(particle, env, particle.long_axis())
}

fn dipole_frequency(particle: &Nanoparticle, env: &Environment, l_q: f64) -> Result<Energy> {
    match particle.shape {
        Shape::Sphere { .. } => sphere_mode_frequency(&particle.metal, env, 1),
        Shape::Ellipsoid { .. } => ellipsoid_mode_frequency(&particle.metal, env, l_q),
    }
}

/// The dipolar mode along the long axis, with its radiative/Ohmic split and
/// effective dipole moment.
pub fn dipolar_mode(particle: &Nanoparticle, env: &Environment) -> Result<PlasmonMode> {
    let axis = particle.long_axis();
    let l_q = particle.depolarization(axis)?;
    let omega = dipole_frequency(particle, env, l_q)?;
    let gamma_rad = dipolar_radiative_rate_along(particle, env, axis)?;
    Ok(PlasmonMode {
        order: 1,
        axis,
        omega,
        gamma_rad,
        gamma_ohmic: particle.metal.gamma_o,
        mu_eff: plasmon_effective_dipole(gamma_rad, omega)?,
    })
}

/// Sphere modes `l = 1..=l_max`. Only the dipolar mode radiates.
pub fn sphere_modes(particle: &Nanoparticle, env: &Environment, l_max: u32) -> Result<Vec<PlasmonMode>> {
    let dipole = dipolar_mode(particle, env)?;
    let mut modes = vec![dipole];
    for l in 2..=l_max {
        modes.push(PlasmonMode {
            order: l,
            axis: 0,
            omega: sphere_mode_frequency(&particle.metal, env, l)?,
            gamma_rad: Energy::ZERO,
            gamma_ohmic: particle.metal.gamma_o,
            mu_eff: DipoleMoment(0.0),
        });
    }
    Ok(modes)
}

/// Dimensionless l-pole response `f_l = l(ε_m − ε_b)/(l ε_m + (l+1) ε_b)`.
pub fn multipole_absorption_response(metal: &DrudeMetal, env: &Environment, l: u32, omega: Energy) -> Result<Complex64> {
    if l < 1 {
        return Err(Error::Domain("multipole order must be >= 1".into()));
    }
    let eps = drude_permittivity(metal, omega)?;
    let l = l as f64;
    Ok(l * (eps - env.eps_b) / (l * eps + (l + 1.0) * env.eps_b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gold_sphere(r: f64) -> Nanoparticle {
        Nanoparticle::sphere(Length(r), DrudeMetal::gold()).unwrap()
    }

    fn rod() -> Nanoparticle {
        Nanoparticle::ellipsoid([Length(33.0), Length(5.5), Length(5.5)], DrudeMetal::gold()).unwrap()
    }

    /// Prolate spheroid long-axis factor in closed form.
    fn prolate_long_axis(a: f64, b: f64) -> f64 {
        let e2 = 1.0 - (b / a).powi(2);
        let e = e2.sqrt();
        (1.0 - e2) / e2 * (e.atanh() / e - 1.0)
    }

    #[test]
    fn permittivity_values() {
        let m = DrudeMetal::gold();
        let eps = drude_permittivity(&m, Energy(1e6)).unwrap();
        assert!((eps.re - 1.0).abs() < 1e-10 && eps.im.abs() < 1e-10);
        let eps = drude_permittivity(&m, Energy(2.309)).unwrap();
        assert!((eps.re + 1.978).abs() < 1e-3, "{eps}");
        assert!((eps.im - 0.258).abs() < 1e-3, "{eps}");
        let eps = drude_permittivity(&m.lossless(), Energy(4.0 / 3f64.sqrt())).unwrap();
        assert!((eps.re + 2.0).abs() < 1e-14 && eps.im == 0.0);
        assert!(drude_permittivity(&m, Energy(0.0)).is_err());
        assert!(drude_permittivity(&m, Energy(-1.0)).is_err());
    }

    #[test]
    fn metal_validation() {
        assert!(DrudeMetal::new(0.5, Energy(4.0), Energy(0.2)).is_err());
        assert!(DrudeMetal::new(1.0, Energy(0.0), Energy(0.2)).is_err());
        assert!(DrudeMetal::new(1.0, Energy(4.0), Energy(-0.1)).is_err());
        assert!(DrudeMetal::new(1.0, Energy(f64::NAN), Energy(0.1)).is_err());
        assert!(Environment::new(0.9).is_err());
    }

    #[test]
    fn sphere_frequencies() {
        let m = DrudeMetal::gold();
        let env = Environment::vacuum();
        let w1 = sphere_mode_frequency(&m, &env, 1).unwrap().0;
        // Oracle: bisect Re ε_m(ω) + 2 = 0 with damping dropped.
        let lossless = m.lossless();
        let root = numerics::find_root(
            |w| drude_permittivity(&lossless, Energy(w)).unwrap().re + 2.0,
            1.0,
            4.0,
            1e-14,
        )
        .unwrap();
        assert!((w1 - root).abs() < 1e-12);
        assert!((w1 - 2.3094).abs() < 1e-4);
        let w2 = sphere_mode_frequency(&m, &env, 2).unwrap().0;
        assert!((w2 - 2.5298).abs() < 1e-4);
        let w_big = sphere_mode_frequency(&m, &env, 100_000).unwrap().0;
        assert!((w_big - 4.0 / 2f64.sqrt()).abs() < 1e-4);
        assert!(sphere_mode_frequency(&m, &env, 0).is_err());
    }

    #[test]
    fn depolarization_examples() {
        let sphere = depolarization_factors([Length(7.0); 3]).unwrap();
        for l in sphere {
            assert!((l - 1.0 / 3.0).abs() < 1e-12);
        }
        let rod = depolarization_factors([Length(33.0), Length(5.5), Length(5.5)]).unwrap();
        let exact = prolate_long_axis(33.0, 5.5);
        assert!((rod[0] - exact).abs() < 1e-10, "{} vs {}", rod[0], exact);
        assert!((rod[0] - 0.0432).abs() < 5e-4);
        assert!((rod.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        let needle = depolarization_factors([Length(1000.0), Length(1.0), Length(1.0)]).unwrap();
        assert!(needle[0] < 1e-4);
    }

    #[test]
    fn lorentzian_reduction_sphere() {
        let p = gold_sphere(10.0);
        let env = Environment::vacuum();
        let alpha = QuasiStaticPolarizability::along(&p, &env, 0).unwrap();
        let fit = lorentzian_reduction(&alpha, (Energy(1.5), Energy(3.0))).unwrap();
        assert!((fit.omega_res.0 - 2.3094).abs() < 1e-4);
        assert!((fit.width.0 - 0.2).abs() < 1e-9, "{}", fit.width.0);
        // Oracle: full width at half maximum of Im α on a fine grid.
        let grid = numerics::linear_grid(1.8, 2.8, 200_001);
        let im: Vec<f64> = grid.iter().map(|&w| alpha.value(w).im).collect();
        let peak = im.iter().cloned().fold(f64::MIN, f64::max);
        let above: Vec<f64> = grid.iter().zip(&im).filter(|(_, &v)| v >= 0.5 * peak).map(|(&w, _)| w).collect();
        let fwhm = above.last().unwrap() - above.first().unwrap();
        assert!((fwhm - 0.2).abs() < 2e-3, "fwhm {fwhm}");
        // Single-pole error oracle: fit/α = (ω² − ω₁² + iωγ) / (2ω₁(ω − ω₁ + iγ/2)).
        let w0 = fit.omega_res.0;
        let g = fit.width.0;
        let mut worst: f64 = 0.0;
        for w in numerics::linear_grid(w0 - g, w0 + g, 201) {
            let exact = alpha.value(w);
            let rel = (fit.eval(w) - exact).norm() / exact.norm();
            let ratio = Complex64::new(w * w - w0 * w0, w * g) / (2.0 * w0 * Complex64::new(w - w0, 0.5 * g));
            assert!((rel - (ratio - 1.0).norm()).abs() < 1e-9, "rel {rel} at {w}");
            if (w - w0).abs() <= 0.5 * g {
                assert!(rel < 0.05, "rel {rel} at {w}");
            }
            worst = worst.max(rel);
        }
        assert!(worst < 0.056, "{worst}");
    }

    #[test]
    fn lorentzian_reduction_rod_and_lossless() {
        let env = Environment::vacuum();
        let alpha = QuasiStaticPolarizability::along(&rod(), &env, 0).unwrap();
        let fit = lorentzian_reduction(&alpha, (Energy(0.3), Energy(1.5))).unwrap();
        assert!((fit.omega_res.0 - 0.832).abs() < 5e-3, "{}", fit.omega_res.0);
        assert!((fit.width.0 - 0.2).abs() < 1e-9);
        let lossless = QuasiStaticPolarizability {
            metal: DrudeMetal::gold().lossless(),
            ..alpha
        };
        let fit = lorentzian_reduction(&lossless, (Energy(0.3), Energy(1.5))).unwrap();
        assert!(fit.width.0.abs() < 1e-12);
    }

    #[test]
    fn lorentzian_reduction_counts_resonances() {
        let env = Environment::vacuum();
        let alpha = QuasiStaticPolarizability::along(&gold_sphere(10.0), &env, 0).unwrap();
        let err = lorentzian_reduction(&alpha, (Energy(0.5), Energy(1.5))).unwrap_err();
        assert!(matches!(err, Error::ResonanceCount { found: 0, .. }));

        struct TwoPoles;
        impl Resonance for TwoPoles {
            fn numerator(&self, _: f64) -> Complex64 {
                Complex64::new(1.0, 0.0)
            }
            fn denominator(&self, w: f64) -> Complex64 {
                Complex64::new((w - 1.0) * (w - 2.0), 0.01)
            }
        }
        let err = lorentzian_reduction(&TwoPoles, (Energy(0.5), Energy(2.5))).unwrap_err();
        assert!(matches!(err, Error::ResonanceCount { found: 2, .. }));
    }

    #[test]
    fn radiative_rates() {
        let env = Environment::vacuum();
        let g10 = dipolar_radiative_rate(&gold_sphere(10.0), &env).unwrap();
        assert!((g10.as_mev() - 2.45).abs() / 2.45 < 0.02, "{}", g10.as_mev());
        assert!((g10.as_mev() - 2.47).abs() < 0.005);
        let g20 = dipolar_radiative_rate(&gold_sphere(20.0), &env).unwrap();
        assert!((g20.0 / g10.0 - 8.0).abs() < 1e-12);
        let g_rod = dipolar_radiative_rate(&rod(), &env).unwrap();
        assert!((g_rod.as_mev() - 0.32).abs() < 0.02, "{}", g_rod.as_mev());
        // Sphere value equals the closed form 2 ε_b R³ ω₁⁶ / (ω_p² (ħc)³).
        let w1 = 4.0 / 3f64.sqrt();
        let closed = 2.0 * 1000.0 * w1.powi(6) / (16.0 * HBAR_C.powi(3));
        assert!((g10.0 - closed).abs() / closed < 1e-14);
    }

    #[test]
    fn multipole_response() {
        let m = DrudeMetal::gold();
        let env = Environment::vacuum();
        let f2 = multipole_absorption_response(&m, &env, 2, Energy(2.309)).unwrap();
        assert!((f2.im - 2.19).abs() < 0.05, "{f2}");
        let pole = multipole_absorption_response(&m.lossless(), &env, 1, Energy(4.0 / 3f64.sqrt())).unwrap();
        assert!(!pole.norm().is_finite() || pole.norm() > 1e10);
        // Far below ω_p the damped metal screens like a conductor: f_1 → 1.
        let stat = multipole_absorption_response(&m, &env, 1, Energy(1e-6)).unwrap();
        assert!((stat - Complex64::new(1.0, 0.0)).norm() < 1e-3, "{stat}");
        // Peak of Im f_l sits near the sphere resonance.
        for l in 2..5 {
            let wl = sphere_mode_frequency(&m, &env, l).unwrap().0;
            let grid = numerics::linear_grid(1.5, 3.5, 20_001);
            let best = grid
                .iter()
                .cloned()
                .max_by(|a, b| {
                    let fa = multipole_absorption_response(&m, &env, l, Energy(*a)).unwrap().im;
                    let fb = multipole_absorption_response(&m, &env, l, Energy(*b)).unwrap().im;
                    fa.total_cmp(&fb)
                })
                .unwrap();
            assert!((best - wl).abs() < 0.02, "l={l}: {best} vs {wl}");
        }
    }

    #[test]
    fn particle_validity_flag() {
        assert!(gold_sphere(10.0).is_quasi_static());
        assert!(!gold_sphere(40.0).is_quasi_static());
        assert_eq!(gold_sphere(40.0).warnings().len(), 1);
        assert!(Nanoparticle::sphere(Length(0.0), DrudeMetal::gold()).is_err());
        assert_eq!(rod().long_axis(), 0);
    }

    proptest::proptest! {
        #[test]
        fn permittivity_is_absorptive(w in 0.01f64..100.0, g in 1e-4f64..1.0) {
            let m = DrudeMetal::new(1.0, Energy(4.0), Energy(g)).unwrap();
            proptest::prop_assert!(drude_permittivity(&m, Energy(w)).unwrap().im > 0.0);
        }

        #[test]
        fn sphere_modes_increase(eps_inf in 1.0f64..10.0, eps_b in 1.0f64..5.0, l in 1u32..40) {
            let m = DrudeMetal::new(eps_inf, Energy(4.0), Energy(0.2)).unwrap();
            let env = Environment::new(eps_b).unwrap();
            let a = sphere_mode_frequency(&m, &env, l).unwrap().0;
            let b = sphere_mode_frequency(&m, &env, l + 1).unwrap().0;
            let bound = 4.0 / (eps_inf + eps_b).sqrt();
            proptest::prop_assert!(a < b && b < bound);
        }

        #[test]
        fn depolarization_sum_and_permutation(a in 1.0f64..50.0, b in 1.0f64..50.0, c in 1.0f64..50.0) {
            let f = depolarization_factors([Length(a), Length(b), Length(c)]).unwrap();
            proptest::prop_assert!((f.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            for x in f {
                proptest::prop_assert!(x > 0.0 && x < 1.0);
            }
            let g = depolarization_factors([Length(c), Length(a), Length(b)]).unwrap();
            proptest::prop_assert!((g[0] - f[2]).abs() < 1e-11);
            proptest::prop_assert!((g[1] - f[0]).abs() < 1e-11);
            proptest::prop_assert!((g[2] - f[1]).abs() < 1e-11);
        }

        #[test]
        fn lorentzian_reduction_fixed_point(w0 in 0.5f64..3.0, width in 1e-3f64..0.3, re in 0.1f64..10.0, im in -1.0f64..1.0) {
            let l = Lorentzian { omega_res: Energy(w0), width: Energy(width), residue: Complex64::new(re, im) };
            let fit = lorentzian_reduction(&l, (Energy(w0 - 0.37), Energy(w0 + 0.41))).unwrap();
            proptest::prop_assert!(((fit.omega_res.0 - w0) / w0).abs() < 1e-6);
            proptest::prop_assert!(((fit.width.0 - width) / width).abs() < 1e-6);
            proptest::prop_assert!((fit.residue - l.residue).norm() / l.residue.norm() < 1e-6);
        }
    }
}
