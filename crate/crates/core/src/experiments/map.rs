use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{golden_section_max, log_grid};
use crate::quantities::{ensure_positive, Length};

use super::figures::{fano_point, FanoPoint};
use super::scenario::{Resolved, Scenario};

/// Emitter-cavity enhancement over emitter distance and cavity Q.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub distances_nm: Vec<f64>,
    pub q_values: Vec<f64>,
    /// `[distance][q]`.
    pub yield_enhancement: Vec<Vec<f64>>,
    /// `[distance][q]`.
    pub power_enhancement: Vec<Vec<f64>>,
}

impl SweepGrid {
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        self.distances_nm.iter().enumerate().flat_map(move |(i, &d)| {
            self.q_values
                .iter()
                .enumerate()
                .map(move |(j, &q)| (d, q, self.yield_enhancement[i][j], self.power_enhancement[i][j]))
        })
    }
}

/// Which enhancement to optimise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Yield,
    Power,
}

impl Objective {
    pub fn of(self, p: &FanoPoint) -> f64 {
        match self {
            Objective::Yield => p.yield_enhancement(),
            Objective::Power => p.power_enhancement(),
        }
    }
}

fn at_distance(scenario: &Scenario, distance_nm: f64) -> Result<Resolved> {
    ensure_positive("distance", distance_nm)?;
    let mut s = scenario.clone();
    let em = s
        .emitter
        .as_mut()
        .ok_or_else(|| Error::Domain("the enhancement map needs an emitter".into()))?;
    em.distance = Length(distance_nm);
    s.resolve()
}

/// Enhancement at one (D, Q) point, evaluated at the Fano detuning Δ₀(D).
pub fn enhancement_cell(scenario: &Scenario, distance_nm: f64, q: f64) -> Result<FanoPoint> {
    fano_point(&at_distance(scenario, distance_nm)?.with_q(q)?)
}

pub fn enhancement_map(scenario: &Scenario, distances_nm: &[f64], q_values: &[f64]) -> Result<SweepGrid> {
    let rows: Vec<Vec<FanoPoint>> = distances_nm
        .par_iter()
        .map(|&d| {
            let r = at_distance(scenario, d)?;
            q_values.iter().map(|&q| fano_point(&r.with_q(q)?)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(SweepGrid {
        distances_nm: distances_nm.to_vec(),
        q_values: q_values.to_vec(),
        yield_enhancement: rows.iter().map(|r| r.iter().map(FanoPoint::yield_enhancement).collect()).collect(),
        power_enhancement: rows.iter().map(|r| r.iter().map(FanoPoint::power_enhancement).collect()).collect(),
    })
}

/// Map over the grids in the scenario's sweep section.
pub fn default_map(scenario: &Scenario) -> Result<SweepGrid> {
    let sw = &scenario.sweep;
    let d = crate::numerics::linear_grid(sw.distance_nm.0, sw.distance_nm.1, sw.distance_points);
    let q = log_grid(sw.q.0, sw.q.1, sw.q_points);
    enhancement_map(scenario, &d, &q)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalQ {
    pub q: f64,
    pub value: f64,
    /// False when the coarse maximum sits on an edge of the Q range; `q` is
    /// then that edge.
    pub interior: bool,
}

/// Relative accuracy of the refined optimum in Q.
pub const OPTIMAL_Q_TOL: f64 = 1e-3;

/// Q maximising the chosen enhancement at one distance: a coarse log scan
/// over the sweep range, then golden-section refinement in ln Q.
pub fn optimal_q(scenario: &Scenario, distance_nm: f64, objective: Objective) -> Result<OptimalQ> {
    let r = at_distance(scenario, distance_nm)?;
    let sw = &scenario.sweep;
    let eval = |q: f64| -> Result<f64> { Ok(objective.of(&fano_point(&r.with_q(q)?)?)) };
    let grid = log_grid(sw.q.0, sw.q.1, sw.q_points.max(3));
    let values = grid.iter().map(|&q| eval(q)).collect::<Result<Vec<_>>>()?;
    let best = (0..values.len()).max_by(|&a, &b| values[a].total_cmp(&values[b])).expect("non-empty grid");
    if best == 0 || best == grid.len() - 1 {
        return Ok(OptimalQ {
            q: grid[best],
            value: values[best],
            interior: false,
        });
    }
    let (a, b) = (grid[best - 1].ln(), grid[best + 1].ln());
    let failure = std::cell::RefCell::new(None);
    let f = |x: f64| match eval(x.exp()) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NEG_INFINITY
        }
    };
    let (x, v) = golden_section_max(f, a, b, OPTIMAL_Q_TOL);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let (q, value) = if v >= values[best] { (x.exp(), v) } else { (grid[best], values[best]) };
    Ok(OptimalQ { q, value, interior: true })
}
