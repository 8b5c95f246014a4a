use std::cell::{Cell, RefCell};

use crate::couplings::CouplingSet;
use crate::dynamics::{polariton_pair, PolaritonPair};
use crate::error::{Error, Result};
use crate::network::build_three_mode;
use crate::numerics::{find_root, log_grid, newton_2d};
use crate::quantities::{ensure_positive, Energy};

use super::scenario::Resolved;

/// Anti-crossing features to reproduce at Δ_{e,c} = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationTargets {
    /// 2g_eff, the splitting of the real parts.
    pub splitting: Energy,
    /// Linewidth of the narrower polariton, κ₂.
    pub kappa_narrow: Energy,
}

/// Relative accuracy required of a calibration.
pub const CALIBRATION_TOL: f64 = 1e-3;

fn pair_at_resonance(base: &Resolved, couplings: CouplingSet) -> Result<PolaritonPair> {
    let mut p = base.three_mode_params();
    p.cavity_detuning = Energy::ZERO;
    p.couplings = couplings;
    polariton_pair(&build_three_mode(&p)?)
}

fn signed_set(base: &Resolved, magnitudes_mev: [f64; 2], signs: [f64; 2]) -> CouplingSet {
    CouplingSet {
        plasmon_emitter: Energy::mev(magnitudes_mev[0].abs() * signs[1].signum()),
        plasmon_cavity: Energy::mev(magnitudes_mev[1].abs() * signs[0].signum()),
        cavity_emitter: base.j.value,
    }
}

fn solve_couplings(base: &Resolved, targets: &CalibrationTargets, signs: [f64; 2], start: [f64; 2]) -> Result<[f64; 2]> {
    let residual = |x: [f64; 2]| -> Result<[f64; 2]> {
        let pair = pair_at_resonance(base, signed_set(base, x, signs))?;
        Ok([
            pair.splitting.0 / targets.splitting.0 - 1.0,
            pair.kappa_narrow.0 / targets.kappa_narrow.0 - 1.0,
        ])
    };
    let x = newton_2d(residual, start, 1e-10, 100)?;
    let r = residual(x)?;
    if r.iter().any(|v| v.abs() > CALIBRATION_TOL) {
        return Err(Error::Calibration {
            iterations: 100,
            residuals: r.to_vec(),
        });
    }
    Ok([x[0].abs(), x[1].abs()])
}

fn initial_guess(base: &Resolved, targets: &CalibrationTargets) -> [f64; 2] {
    let half = 0.5 * targets.splitting.as_mev();
    let detuning = base.plasmon_detuning.as_mev().abs();
    // Plasmon-mediated coupling g_eff ≈ G g₁ / Δ_{1,e} when far detuned.
    let g = if detuning > 10.0 * half { (half * detuning).sqrt() } else { half };
    [g, g]
}

/// Finds |G| and |g₁| so that the polariton pair at Δ_{e,c} = 0 has the
/// target splitting and narrow linewidth. J is taken from `base`.
pub fn calibrate_fig3_couplings(base: &Resolved, targets: &CalibrationTargets, signs: [f64; 2]) -> Result<CouplingSet> {
    ensure_positive("target splitting", targets.splitting.0)?;
    ensure_positive("target linewidth", targets.kappa_narrow.0)?;
    let x = solve_couplings(base, targets, signs, initial_guess(base, targets))?;
    Ok(signed_set(base, x, signs))
}

/// Calibrates the couplings and additionally the emitter quench rate γ_m,
/// choosing it so that |G| = |g₁|, which centres the anti-crossing on
/// Δ_{e,c} = 0. Returns the couplings and γ_m.
pub fn calibrate_centered(base: &Resolved, targets: &CalibrationTargets, signs: [f64; 2]) -> Result<(CouplingSet, Energy)> {
    ensure_positive("target splitting", targets.splitting.0)?;
    ensure_positive("target linewidth", targets.kappa_narrow.0)?;
    let gamma_s = base.gamma_s.value.0;
    let warm = Cell::new(initial_guess(base, targets));
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let with_width = |gamma_e: f64| -> Result<[f64; 2]> {
        let mut b = base.clone();
        b.gamma_m.value = Energy(gamma_e - gamma_s);
        let x = solve_couplings(&b, targets, signs, warm.get())?;
        warm.set(x);
        Ok(x)
    };
    let asymmetry = |gamma_e: f64| match with_width(gamma_e) {
        Ok(x) => x[0] - x[1],
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    // The narrow polariton width lies between γ_c and γ_e, so γ_e must
    // exceed the target; scan upward for a sign change.
    let lo = targets.kappa_narrow.0.max(gamma_s) * 1.05;
    let grid = log_grid(lo, 40.0 * lo, 25);
    let mut prev: Option<(f64, f64)> = None;
    let mut bracket = None;
    for &g in &grid {
        let v = asymmetry(g);
        failure.borrow_mut().take();
        if !v.is_finite() {
            prev = None;
            continue;
        }
        if let Some((gp, vp)) = prev {
            if vp.signum() != v.signum() {
                bracket = Some((gp, g));
                break;
            }
        }
        prev = Some((g, v));
    }
    let (a, b) = bracket.ok_or_else(|| Error::Calibration {
        iterations: grid.len(),
        residuals: vec![f64::NAN],
    })?;
    let gamma_e = find_root(asymmetry, a, b, 1e-9 * b)?;
    if let Some(e) = failure.borrow_mut().take() {
        return Err(e);
    }
    let x = with_width(gamma_e)?;
    Ok((signed_set(base, x, signs), Energy(gamma_e - gamma_s)))
}
