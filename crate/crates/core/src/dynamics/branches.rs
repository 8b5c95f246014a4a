use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{eigen, CVector, Eigen};
use crate::network::{EffectiveHamiltonian, ModeLabel};
use crate::quantities::Energy;

/// Complex eigenvalues over a parameter sweep, with branch identity carried
/// by eigenvector continuity.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenBranchSet {
    pub sweep: Vec<f64>,
    pub basis: Vec<ModeLabel>,
    /// `values[branch][point]`.
    pub values: Vec<Vec<Complex64>>,
    /// `weights[branch][point][mode]`, squared eigenvector components.
    pub weights: Vec<Vec<Vec<f64>>>,
}

impl EigenBranchSet {
    pub fn branch_count(&self) -> usize {
        self.values.len()
    }

    /// `Re λ` of one branch.
    pub fn detunings(&self, branch: usize) -> Vec<f64> {
        self.values[branch].iter().map(|z| z.re).collect()
    }

    /// `−2 Im λ` of one branch.
    pub fn linewidths(&self, branch: usize) -> Vec<f64> {
        self.values[branch].iter().map(|z| -2.0 * z.im).collect()
    }

    fn mean_weight(&self, branch: usize, label: ModeLabel) -> f64 {
        match self.basis.iter().position(|&l| l == label) {
            Some(i) => self.weights[branch].iter().map(|w| w[i]).sum::<f64>() / self.sweep.len() as f64,
            None => 0.0,
        }
    }

    /// The two branches with the least plasmon character.
    pub fn polariton_branches(&self) -> Result<[usize; 2]> {
        if self.branch_count() < 2 {
            return Err(Error::Domain("need at least two branches".into()));
        }
        let mut order: Vec<usize> = (0..self.branch_count()).collect();
        order.sort_by(|&a, &b| {
            self.mean_weight(a, ModeLabel::PlasmonDipole)
                .total_cmp(&self.mean_weight(b, ModeLabel::PlasmonDipole))
                .then(a.cmp(&b))
        });
        let mut pair = [order[0], order[1]];
        pair.sort();
        Ok(pair)
    }

    /// Separation statistics of the polariton pair across the sweep.
    pub fn summary(&self) -> Result<BranchSummary> {
        let pair = self.polariton_branches()?;
        let (a, b) = (&self.values[pair[0]], &self.values[pair[1]]);
        let re: Vec<f64> = a.iter().zip(b).map(|(x, y)| x.re - y.re).collect();
        let im: Vec<f64> = a.iter().zip(b).map(|(x, y)| x.im - y.im).collect();
        let argmin = |v: &[f64]| {
            v.iter()
                .enumerate()
                .min_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
                .map(|(i, d)| (i, d.abs()))
                .expect("non-empty sweep")
        };
        let crossings = |v: &[f64]| {
            let signs: Vec<f64> = v.iter().filter(|x| **x != 0.0).map(|x| x.signum()).collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let (ire, min_re) = argmin(&re);
        let (iim, min_im) = argmin(&im);
        Ok(BranchSummary {
            pair,
            min_re_separation: Energy(min_re),
            min_re_at: self.sweep[ire],
            min_im_separation: Energy(min_im),
            min_im_at: self.sweep[iim],
            re_crossings: crossings(&re),
            im_crossings: crossings(&im),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchSummary {
    pub pair: [usize; 2],
    pub min_re_separation: Energy,
    pub min_re_at: f64,
    /// Smallest `|Im λ_a − Im λ_b|`; half the linewidth difference.
    pub min_im_separation: Energy,
    pub min_im_at: f64,
    /// Sign changes of `Re λ_a − Re λ_b`.
    pub re_crossings: usize,
    pub im_crossings: usize,
}

fn overlap(u: &CVector, v: &CVector) -> f64 {
    u.dotc(v).norm().max(u.dot(v).norm())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Assignment of new eigenpairs to existing branches maximising the summed
/// overlap. Overlap ties fall back to eigenvalue proximity; a tie there too
/// is an error.
fn assign(prev: &[(Complex64, CVector)], next: &Eigen, index: usize) -> Result<Vec<usize>> {
    const TIE: f64 = 1e-9;
    let n = prev.len();
    let ov: Vec<Vec<f64>> = prev
        .iter()
        .map(|(_, u)| next.vectors.iter().map(|v| overlap(u, v)).collect())
        .collect();
    let perms = permutations(n);
    let score = |p: &[usize]| (0..n).map(|b| ov[b][p[b]]).sum::<f64>();
    let best = perms.iter().map(|p| score(p)).fold(f64::MIN, f64::max);
    let tied: Vec<&Vec<usize>> = perms.iter().filter(|p| score(p) >= best - TIE).collect();
    if tied.len() == 1 {
        return Ok(tied[0].clone());
    }
    let distance = |p: &[usize]| (0..n).map(|b| (prev[b].0 - next.values[p[b]]).norm()).sum::<f64>();
    let scale = prev.iter().map(|(l, _)| l.norm()).fold(f64::MIN_POSITIVE, f64::max);
    let closest = tied.iter().map(|p| distance(p)).fold(f64::INFINITY, f64::min);
    let near: Vec<&&Vec<usize>> = tied.iter().filter(|p| distance(p) <= closest + 1e-12 * scale).collect();
    if near.len() == 1 {
        Ok((*near[0]).clone())
    } else {
        Err(Error::TrackingAmbiguity { index })
    }
}

/// Eigenvalues of `family(x)` for every `x` in `sweep`, tracked by maximal
/// eigenvector overlap between neighbouring points. Branches start ordered
/// by `Re λ` at the first point.
pub fn eigen_branches<F>(family: F, sweep: &[f64]) -> Result<EigenBranchSet>
where
    F: Fn(f64) -> Result<EffectiveHamiltonian> + Sync,
{
    if sweep.is_empty() {
        return Err(Error::Domain("empty sweep".into()));
    }
    let decomps = sweep
        .par_iter()
        .map(|&x| {
            let h = family(x)?;
            Ok((h.basis.clone(), eigen(&h.matrix)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let basis = decomps[0].0.clone();
    if decomps.iter().any(|(b, _)| *b != basis) {
        return Err(Error::Domain("basis changes along the sweep".into()));
    }
    let n = basis.len();
    let first = &decomps[0].1;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (first.values[a], first.values[b]);
        x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
    });
    let mut current: Vec<(Complex64, CVector)> = order
        .iter()
        .map(|&i| (first.values[i], first.vectors[i].clone()))
        .collect();
    let mut values = vec![Vec::with_capacity(sweep.len()); n];
    let mut weights = vec![Vec::with_capacity(sweep.len()); n];
    let push = |current: &[(Complex64, CVector)], values: &mut [Vec<Complex64>], weights: &mut [Vec<Vec<f64>>]| {
        for (b, (l, v)) in current.iter().enumerate() {
            values[b].push(*l);
            weights[b].push(v.iter().map(|z| z.norm_sqr()).collect());
        }
    };
    push(&current, &mut values, &mut weights);
    for (k, (_, e)) in decomps.iter().enumerate().skip(1) {
        let perm = assign(&current, e, k)?;
        current = perm.iter().map(|&j| (e.values[j], e.vectors[j].clone())).collect();
        push(&current, &mut values, &mut weights);
    }
    Ok(EigenBranchSet {
        sweep: sweep.to_vec(),
        basis,
        values,
        weights,
    })
}

/// The two strongly coupled normal modes at one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolaritonPair {
    /// Eigenvalues ordered by real part.
    pub values: [Complex64; 2],
    /// `|Re λ_a − Re λ_b|`, i.e. 2g_eff.
    pub splitting: Energy,
    /// Larger of the two linewidths `−2 Im λ`.
    pub kappa_broad: Energy,
    pub kappa_narrow: Energy,
    /// `splitting² / (κ_broad κ_narrow)`.
    pub cooperativity: f64,
}

/// Drops the most plasmon-like eigenmode (for three-mode systems) and
/// characterises the remaining pair.
pub fn polariton_pair(h: &EffectiveHamiltonian) -> Result<PolaritonPair> {
    let e = eigen(&h.matrix)?;
    let mut idx: Vec<usize> = (0..e.values.len()).collect();
    if idx.len() < 2 {
        return Err(Error::Domain("need at least two modes".into()));
    }
    if let Some(p) = h.index_of(ModeLabel::PlasmonDipole) {
        idx.sort_by(|&a, &b| e.vectors[a][p].norm_sqr().total_cmp(&e.vectors[b][p].norm_sqr()));
    }
    let mut pair = [e.values[idx[0]], e.values[idx[1]]];
    pair.sort_by(|a, b| a.re.total_cmp(&b.re));
    let k = [-2.0 * pair[0].im, -2.0 * pair[1].im];
    let (broad, narrow) = (k[0].max(k[1]), k[0].min(k[1]));
    let splitting = (pair[1].re - pair[0].re).abs();
    Ok(PolaritonPair {
        values: pair,
        splitting: Energy(splitting),
        kappa_broad: Energy(broad),
        kappa_narrow: Energy(narrow),
        cooperativity: splitting * splitting / (broad * narrow),
    })
}
