//! Small dense complex linear algebra on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Solves `a x = b` by LU with partial pivoting. Rejects numerically
/// singular systems (reciprocal 1-norm condition estimate below 1e-14).
pub fn solve(a: &CMatrix, b: &CVector) -> Result<CVector> {
    let norm = one_norm(a);
    let lu = a.clone().lu();
    let x = lu
        .solve(b)
        .ok_or_else(|| Error::Conditioning("singular linear system".into()))?;
    if norm > 0.0 {
        // Cheap conditioning check on the pivots.
        let u = lu.u();
        let min_pivot = (0..u.nrows()).map(|i| u[(i, i)].norm()).fold(f64::INFINITY, f64::min);
        if min_pivot <= 1e-14 * norm {
            return Err(Error::Conditioning(format!(
                "ill-conditioned linear system (pivot {min_pivot:e}, norm {norm:e})"
            )));
        }
    }
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Conditioning("non-finite solution".into()));
    }
    Ok(x)
}

pub fn one_norm(a: &CMatrix) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Eigen-decomposition of a general complex matrix.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<Complex64>,
    /// Unit-2-norm right eigenvectors, one per value.
    pub vectors: Vec<CVector>,
}

/// Eigenvalues and right eigenvectors from the complex Schur form
/// `A = Q T Q†` followed by back-substitution on `T`.
pub fn eigen(a: &CMatrix) -> Result<Eigen> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Domain("eigen decomposition needs a square matrix".into()));
    }
    let scale = one_norm(a).max(f64::MIN_POSITIVE);
    let schur = nalgebra::linalg::Schur::try_new(a.clone(), 1e-15 * scale, 10_000)
        .ok_or_else(|| Error::Conditioning("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    let values: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    let tiny = 1e-15 * scale;
    let mut vectors = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = values[k];
        let mut y = CVector::zeros(n);
        y[k] = c(1.0, 0.0);
        for j in (0..k).rev() {
            let mut acc = c(0.0, 0.0);
            for m in (j + 1)..=k {
                acc += t[(j, m)] * y[m];
            }
            let mut denom = t[(j, j)] - lambda;
            if denom.norm() < tiny {
                denom = c(tiny, 0.0);
            }
            y[j] = -acc / denom;
        }
        let x = &q * y;
        let nrm = x.norm();
        vectors.push(x / c(nrm, 0.0));
    }
    Ok(Eigen { values, vectors })
}

/// `exp(a)` by scaling and squaring with a Padé approximant.
pub fn expm(a: &CMatrix) -> CMatrix {
    a.exp()
}
