use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, eigen, expm, CVector};
use crate::network::{EffectiveHamiltonian, ModeLabel};
use crate::quantities::HBAR_EV_FS;

/// Mode populations `|v_i(t)|²` on a time grid in fs.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeTrace {
    pub times_fs: Vec<f64>,
    pub basis: Vec<ModeLabel>,
    /// One series per basis mode.
    pub populations: Vec<Vec<f64>>,
}

impl TimeTrace {
    pub fn population(&self, label: ModeLabel) -> Option<&[f64]> {
        self.basis.iter().position(|&l| l == label).map(|i| self.populations[i].as_slice())
    }

    pub fn total(&self) -> Vec<f64> {
        (0..self.times_fs.len())
            .map(|k| self.populations.iter().map(|p| p[k]).sum())
            .collect()
    }

    fn from_states(times_fs: &[f64], basis: &[ModeLabel], states: &[CVector]) -> Self {
        let populations = (0..basis.len())
            .map(|i| states.iter().map(|v| v[i].norm_sqr()).collect())
            .collect();
        Self {
            times_fs: times_fs.to_vec(),
            basis: basis.to_vec(),
            populations,
        }
    }
}

fn check_grid(h: &EffectiveHamiltonian, v0: &CVector, times_fs: &[f64]) -> Result<()> {
    if v0.len() != h.dim() {
        return Err(Error::Domain(format!(
            "initial state has {} components, basis has {}",
            v0.len(),
            h.dim()
        )));
    }
    match times_fs.first() {
        None => return Err(Error::Domain("empty time grid".into())),
        Some(&t0) if !(t0 >= 0.0) => return Err(Error::Domain("time grid must start at t >= 0".into())),
        _ => {}
    }
    if times_fs.windows(2).any(|w| !(w[1] > w[0])) || times_fs.iter().any(|t| !t.is_finite()) {
        return Err(Error::Domain("time grid must be finite and strictly increasing".into()));
    }
    Ok(())
}

/// `exp(−iHt) v0` with `t` in eV⁻¹.
pub fn propagate(h: &EffectiveHamiltonian, v0: &CVector, t: f64) -> CVector {
    expm(&(&h.matrix * c(0.0, -t))) * v0
}

/// Evolves `v0` under `H` with the matrix exponential at every grid time.
pub fn evolve(h: &EffectiveHamiltonian, v0: &CVector, times_fs: &[f64]) -> Result<TimeTrace> {
    check_grid(h, v0, times_fs)?;
    let states: Vec<CVector> = times_fs.iter().map(|&t| propagate(h, v0, t / HBAR_EV_FS)).collect();
    Ok(TimeTrace::from_states(times_fs, &h.basis, &states))
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Adaptive Dormand-Prince integration of `dv/dt = −iHv`, stepping exactly
/// onto every grid time. Independent of [`evolve`]; used to cross-check it.
pub fn evolve_rk45(h: &EffectiveHamiltonian, v0: &CVector, times_fs: &[f64], rel_tol: f64, abs_tol: f64) -> Result<TimeTrace> {
    check_grid(h, v0, times_fs)?;
    const MAX_STEPS: usize = 50_000_000;
    let m = &h.matrix * c(0.0, -1.0);
    let rhs = |v: &CVector| &m * v;
    let scale = crate::linalg::one_norm(&h.matrix).max(f64::MIN_POSITIVE);
    let mut v = v0.clone();
    let mut t = 0.0;
    let mut step = 0.1 / scale;
    let mut k1 = rhs(&v);
    let mut steps = 0usize;
    let mut states = Vec::with_capacity(times_fs.len());
    for &target_fs in times_fs {
        let target = target_fs / HBAR_EV_FS;
        while t < target {
            steps += 1;
            if steps > MAX_STEPS {
                return Err(Error::Conditioning("adaptive integrator exceeded its step budget".into()));
            }
            let hstep = step.min(target - t);
            let mut k: Vec<CVector> = Vec::with_capacity(7);
            k.push(k1.clone());
            for s in 1..7 {
                let mut y = v.clone();
                for (j, kj) in k.iter().enumerate() {
                    if A[s][j] != 0.0 {
                        y += kj * Complex64::new(hstep * A[s][j], 0.0);
                    }
                }
                k.push(rhs(&y));
            }
            let mut y5 = v.clone();
            let mut err = CVector::zeros(v.len());
            for (i, ki) in k.iter().enumerate() {
                y5 += ki * Complex64::new(hstep * B5[i], 0.0);
                err += ki * Complex64::new(hstep * (B5[i] - B4[i]), 0.0);
            }
            let ratio = err
                .iter()
                .zip(v.iter().zip(y5.iter()))
                .map(|(e, (a, b))| e.norm() / (abs_tol + rel_tol * a.norm().max(b.norm())))
                .fold(0.0, f64::max);
            if ratio <= 1.0 {
                t = if hstep == target - t { target } else { t + hstep };
                v = y5;
                k1 = k.swap_remove(6);
            }
            let factor = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
            // Do not let a short final hop onto a grid time shrink the step.
            if ratio <= 1.0 && hstep < step {
                step = step.max(hstep * factor);
            } else {
                step = hstep * factor;
            }
        }
        states.push(v.clone());
    }
    Ok(TimeTrace::from_states(times_fs, &h.basis, &states))
}

/// `points` equally spaced times from 0 to `spans/γ_slowest`, in fs, where
/// `γ_slowest = min(−2 Im λ)` over the eigenvalues of `H`.
pub fn default_time_grid(h: &EffectiveHamiltonian, spans: f64, points: usize) -> Result<Vec<f64>> {
    let slowest = eigen(&h.matrix)?
        .values
        .iter()
        .map(|l| -2.0 * l.im)
        .fold(f64::INFINITY, f64::min);
    if !(slowest > 0.0) {
        return Err(Error::Domain("a lossless mode has no decay time scale".into()));
    }
    if points < 2 {
        return Err(Error::Domain("time grid needs at least two points".into()));
    }
    Ok(crate::numerics::linear_grid(0.0, spans / slowest * HBAR_EV_FS, points))
}

/// Number of strict local maxima of `series` above `threshold`.
pub fn count_oscillation_maxima(series: &[f64], threshold: f64) -> usize {
    series
        .windows(3)
        .filter(|w| w[1] > w[0] && w[1] > w[2] && w[1] > threshold)
        .count()
}
