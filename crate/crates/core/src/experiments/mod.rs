//! Scenarios and the figure-level experiments built on them.

mod calibration;
mod figures;
mod map;
mod scenario;

pub use calibration::{calibrate_centered, calibrate_fig3_couplings, CalibrationTargets, CALIBRATION_TOL};
pub use figures::{
    at_emitter_cavity_detuning, broadest_hybrid_width, default_spectral_half_width, detuning_grid, fano_point, fig1c_half_width, run_fig1c, run_fig1c_resolved, run_fig2, run_fig3,
    run_fig3_fig4, run_fig3_resolved, run_fig4, run_fig4_resolved, FanoPoint, Fig1cResult, Fig2Result, Fig3Result,
    Fig4Result, FIG4_SPECTRA, MAXIMA_THRESHOLD, WINDOW_LINEWIDTHS,
};
pub use map::{default_map, enhancement_cell, enhancement_map, optimal_q, Objective, OptimalQ, SweepGrid, OPTIMAL_Q_TOL};
pub use scenario::{
    CavitySpec, CouplingMode, CouplingSpec, EmitterSpec, Overrides, Provenance, QuenchReference, Resolved, RunSpec,
    Scenario, Sourced, SweepSpec, NM3_PER_UM3,
};
