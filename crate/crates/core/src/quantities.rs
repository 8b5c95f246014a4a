//! Unit conventions and the two physical constants the model is built on.
//!
//! Everything is expressed in natural units: energies (frequencies, decay
//! rates, couplings) in eV with ħ = 1, lengths in nm, dipole moments in
//! e·nm. Decay rates are full widths; the Hamiltonian builders insert the
//! `-iγ/2` factors.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// ħc in eV·nm.
pub const HBAR_C: f64 = 197.3270;

/// e²/(4πε₀) in eV·nm.
pub const COULOMB: f64 = 1.439964;

/// ħ in eV·fs. Only used to convert time axes at the output boundary.
pub const HBAR_EV_FS: f64 = 0.658_211_957;

/// An energy (or frequency, rate, coupling) in eV.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Energy(pub f64);

impl Energy {
    pub const ZERO: Energy = Energy(0.0);

    pub const fn ev(value: f64) -> Self {
        Energy(value)
    }

    pub fn mev(value: f64) -> Self {
        Energy(value * 1e-3)
    }

    pub fn uev(value: f64) -> Self {
        Energy(value * 1e-6)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn as_mev(self) -> f64 {
        self.0 * 1e3
    }

    pub fn as_uev(self) -> f64 {
        self.0 * 1e6
    }

    pub fn abs(self) -> Self {
        Energy(self.0.abs())
    }
}

impl fmt::Display for Energy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} eV", self.0)
    }
}

impl Add for Energy {
    type Output = Energy;
    fn add(self, rhs: Energy) -> Energy {
        Energy(self.0 + rhs.0)
    }
}

impl Sub for Energy {
    type Output = Energy;
    fn sub(self, rhs: Energy) -> Energy {
        Energy(self.0 - rhs.0)
    }
}

impl Neg for Energy {
    type Output = Energy;
    fn neg(self) -> Energy {
        Energy(-self.0)
    }
}

impl Mul<f64> for Energy {
    type Output = Energy;
    fn mul(self, rhs: f64) -> Energy {
        Energy(self.0 * rhs)
    }
}

impl Div<f64> for Energy {
    type Output = Energy;
    fn div(self, rhs: f64) -> Energy {
        Energy(self.0 / rhs)
    }
}

/// A length in nm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Length(pub f64);

impl Length {
    pub const fn nm(value: f64) -> Self {
        Length(value)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// A transition or induced dipole moment in e·nm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DipoleMoment(pub f64);

impl DipoleMoment {
    pub const fn e_nm(value: f64) -> Self {
        DipoleMoment(value)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Rejects NaN and infinities with a message naming the offending input.
pub fn ensure_finite(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {value}")))
    }
}

pub fn ensure_positive(name: &str, value: f64) -> Result<f64> {
    ensure_finite(name, value)?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain(format!("{name} must be > 0, got {value}")))
    }
}

pub fn ensure_non_negative(name: &str, value: f64) -> Result<f64> {
    ensure_finite(name, value)?;
    if value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain(format!("{name} must be >= 0, got {value}")))
    }
}

/// Wavevector `√ε_b · ω / ħc` in nm⁻¹.
pub fn wavevector(omega: Energy, eps_b: f64) -> Result<f64> {
    let omega = ensure_positive("omega", omega.0)?;
    let eps_b = ensure_positive("eps_b", eps_b)?;
    Ok(eps_b.sqrt() * omega / HBAR_C)
}
