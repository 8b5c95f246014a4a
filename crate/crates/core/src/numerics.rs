//! Scalar numerical kernels: adaptive quadrature, bracketed root finding,
//! golden-section maximisation and a damped two-dimensional Newton solve.

use crate::error::{Error, Result};

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        // Odd Kronrod indices coincide with the Gauss nodes.
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// Subintervals are bisected until the Kronrod/Gauss difference on each is
/// below its share of `max(rel_tol·|I|, abs_tol)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<f64> {
    const MAX_INTERVALS: usize = 10_000;
    let (whole, err) = gauss_kronrod_15(&f, a, b);
    let mut pieces = vec![(a, b, whole, err)];
    loop {
        let total: f64 = pieces.iter().map(|p| p.2).sum();
        let total_err: f64 = pieces.iter().map(|p| p.3).sum();
        if !total.is_finite() {
            return Err(Error::Conditioning("non-finite integrand".into()));
        }
        // Never ask for more than rounding allows.
        let floor = 50.0 * f64::EPSILON * pieces.iter().map(|p| p.2.abs()).sum::<f64>();
        if total_err <= (rel_tol * total.abs()).max(abs_tol).max(floor) {
            return Ok(total);
        }
        if pieces.len() >= MAX_INTERVALS {
            return Err(Error::Conditioning(format!(
                "quadrature did not reach tolerance (estimated error {total_err:e})"
            )));
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (lo, hi, _, _) = pieces.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (left, left_err) = gauss_kronrod_15(&f, lo, mid);
        let (right, right_err) = gauss_kronrod_15(&f, mid, hi);
        pieces.push((lo, mid, left, left_err));
        pieces.push((mid, hi, right, right_err));
    }
}

/// Brent's method on a sign-changing bracket.
pub fn find_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, x_tol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Domain(format!(
            "root not bracketed on [{lo}, {hi}] (f = {fa:e}, {fb:e})"
        )));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * x_tol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    Err(Error::Conditioning("root finder exceeded 200 iterations".into()))
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
/// Stops once the bracket is narrower than `x_tol`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, x_tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > x_tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Damped Newton iteration for a 2×2 system with a forward-difference
/// Jacobian and residual-decreasing backtracking.
pub fn newton_2d<F>(f: F, start: [f64; 2], tol: f64, max_iter: usize) -> Result<[f64; 2]>
where
    F: Fn([f64; 2]) -> Result<[f64; 2]>,
{
    let norm = |r: [f64; 2]| r[0].abs().max(r[1].abs());
    let mut x = start;
    let mut r = f(x)?;
    for _ in 0..max_iter {
        if norm(r) < tol {
            return Ok(x);
        }
        let mut jac = [[0.0; 2]; 2];
        for k in 0..2 {
            let h = 1e-7 * x[k].abs().max(1e-12);
            let mut xp = x;
            xp[k] += h;
            let rp = f(xp)?;
            jac[0][k] = (rp[0] - r[0]) / h;
            jac[1][k] = (rp[1] - r[1]) / h;
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::Calibration {
                iterations: 0,
                residuals: r.to_vec(),
            });
        }
        let dx = [
            -(jac[1][1] * r[0] - jac[0][1] * r[1]) / det,
            -(-jac[1][0] * r[0] + jac[0][0] * r[1]) / det,
        ];
        // Backtrack until the residual shrinks.
        let mut step = 1.0;
        loop {
            let trial = [x[0] + step * dx[0], x[1] + step * dx[1]];
            if let Ok(rt) = f(trial) {
                if norm(rt) < norm(r) || step < 1e-6 {
                    x = trial;
                    r = rt;
                    break;
                }
            }
            step *= 0.5;
            if step < 1e-6 {
                return Err(Error::Calibration {
                    iterations: max_iter,
                    residuals: r.to_vec(),
                });
            }
        }
    }
    if norm(r) < tol {
        Ok(x)
    } else {
        Err(Error::Calibration {
            iterations: max_iter,
            residuals: r.to_vec(),
        })
    }
}

/// `n` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_known_integrals() {
        let v = integrate(|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12, 0.0).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        let v = integrate(|x: f64| 1.0 / (1.0 + x * x), -50.0, 50.0, 1e-11, 0.0).unwrap();
        assert!((v - 2.0 * 50f64.atan()).abs() < 1e-10);
        // Integrable endpoint singularity.
        let v = integrate(|x: f64| 1.0 / x.sqrt(), 1e-12, 1.0, 1e-9, 0.0).unwrap();
        assert!((v - (2.0 - 2e-6)).abs() < 1e-8);
    }

    #[test]
    fn root_and_golden() {
        let r = find_root(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        assert!(find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
        let (x, fx) = golden_section_max(|x| -(x - 0.3).powi(2) + 1.0, -2.0, 2.0, 1e-9);
        assert!((x - 0.3).abs() < 1e-8);
        assert!((fx - 1.0).abs() < 1e-12);
    }

    #[test]
    fn newton_solves_coupled_system() {
        let sol = newton_2d(
            |x| Ok([x[0] * x[0] + x[1] * x[1] - 4.0, x[0] - x[1]]),
            [1.0, 0.5],
            1e-12,
            50,
        )
        .unwrap();
        assert!((sol[0] - 2f64.sqrt()).abs() < 1e-9);
        assert!((sol[1] - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn grids_hit_endpoints() {
        let g = log_grid(1e2, 1e7, 61);
        assert_eq!(g[0], 1e2);
        assert_eq!(g[60], 1e7);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        let g = linear_grid(-1.0, 1.0, 11);
        assert_eq!(g[10], 1.0);
        assert!((g[5]).abs() < 1e-15);
    }
}
