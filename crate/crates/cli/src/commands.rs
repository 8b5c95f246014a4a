use std::fs;

use plasmon_core::dynamics::{default_time_grid, eigen_branches, emission_spectrum, evolve as run_evolve, SpectrumResult};
use plasmon_core::experiments::{
    at_emitter_cavity_detuning, broadest_hybrid_width, default_map, default_spectral_half_width, detuning_grid,
    fano_point, fig1c_half_width, optimal_q, run_fig1c, run_fig2, run_fig3, run_fig4, Objective, Resolved, Scenario,
    WINDOW_LINEWIDTHS,
};
use plasmon_core::linalg::{c, CVector};
use plasmon_core::network::{EffectiveHamiltonian, ModeLabel};
use plasmon_core::output::{fmt_float, ResultTable};
use plasmon_core::{Error, Result};

use crate::{Common, Format, ObjectiveArg};

fn emit(common: &Common, table: &ResultTable) -> Result<()> {
    fs::create_dir_all(&common.out)?;
    let (ext, body) = match common.format {
        Format::Csv => ("csv", table.to_csv()),
        Format::Json => ("json", table.to_json()),
    };
    let path = common.out.join(format!("{}.{ext}", table.name));
    fs::write(&path, body)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn table(name: &str, columns: &[&str], s: &Scenario, r: &Resolved) -> ResultTable {
    ResultTable::new(name, columns, s).with_resolved(r)
}

fn need_emitter(s: &Scenario, what: &str) -> Result<()> {
    if s.has_emitter() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} needs a scenario with an [emitter] section")))
    }
}

pub fn fig1c(s: &Scenario, common: &Common) -> Result<()> {
    let f = run_fig1c(s)?;
    let mut t = table(
        "fig1c",
        &["detuning_ev", "phi_rad_cavity", "phi_rad_bare", "phi_abs_cavity", "phi_abs_bare"],
        s,
        &f.resolved,
    );
    let cols = [f.rad_cavity(), f.rad_bare(), f.abs_cavity(), f.abs_bare()];
    for (i, &d) in f.detunings.iter().enumerate() {
        t.push(vec![d, cols[0][i], cols[1][i], cols[2][i], cols[3][i]]);
    }
    emit(common, &t)
}

pub fn fig2(s: &Scenario, common: &Common) -> Result<()> {
    let f = run_fig2(s)?;
    let p = f.at_delta0()?;
    let meta = |t: ResultTable| {
        t.meta("delta0_ev", fmt_float(f.delta0.0))
            .meta("eta_cavity_at_delta0", fmt_float(p.eta_cavity))
            .meta("eta_bare_at_delta0", fmt_float(p.eta_bare))
            .meta("power_enhancement_at_delta0", fmt_float(p.power_enhancement()))
    };
    let mut y = meta(table("fig2_yield", &["detuning_ev", "eta_cavity", "eta_bare"], s, &f.resolved));
    let (ec, eb) = (f.eta_cavity()?, f.eta_bare()?);
    for (i, &d) in f.detunings.iter().enumerate() {
        y.push(vec![d, ec[i], eb[i]]);
    }
    let mut w = meta(table(
        "fig2_power",
        &["detuning_ev", "rad_cavity", "rad_bare", "ohm_cavity", "ohm_bare"],
        s,
        &f.resolved,
    ));
    let cols = [
        f.with_cavity.total_radiative(),
        f.bare.total_radiative(),
        f.with_cavity.total_ohmic(),
        f.bare.total_ohmic(),
    ];
    for (i, &d) in f.detunings.iter().enumerate() {
        w.push(vec![d, cols[0][i], cols[1][i], cols[2][i], cols[3][i]]);
    }
    emit(common, &y)?;
    emit(common, &w)
}

fn trace_column(q: Option<f64>) -> String {
    match q {
        Some(q) => format!("emitter_q{q:e}"),
        None => "emitter_bare".into(),
    }
}

pub fn fig3(s: &Scenario, common: &Common) -> Result<()> {
    let f = run_fig3(s)?;
    let mut names = vec!["time_fs".to_string()];
    names.extend(f.traces.iter().map(|(q, _)| trace_column(*q)));
    let cols: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut traces = table("fig3_traces", &cols, s, &f.resolved);
    for (q, n) in &f.maxima {
        traces = traces.meta(&format!("maxima_{}", trace_column(*q)), n);
    }
    let times = &f.traces[0].1.times_fs;
    for (i, &t) in times.iter().enumerate() {
        let mut row = vec![t];
        row.extend(f.traces.iter().map(|(_, tr)| tr.population(ModeLabel::Emitter).expect("emitter trace")[i]));
        traces.push(row);
    }
    let mut spec = table("fig3_spectrum", &["detuning_ev", "rad_cavity", "rad_bare"], s, &f.resolved);
    if let Some(d) = f.doublet {
        spec = spec.meta("doublet_separation_ev", fmt_float(d));
    }
    let (a, b) = (f.spectrum.total_radiative(), f.bare_spectrum.total_radiative());
    for (i, &d) in f.detunings.iter().enumerate() {
        spec.push(vec![d, a[i], b[i]]);
    }
    emit(common, &traces)?;
    emit(common, &spec)
}

fn branch_columns(basis: &[ModeLabel], n: usize) -> Vec<String> {
    let mut cols = vec!["detuning_ec_ev".to_string()];
    for b in 0..n {
        cols.push(format!("re_{b}_ev"));
        cols.push(format!("width_{b}_ev"));
        for l in basis {
            cols.push(format!("weight_{b}_{}", l.as_str()));
        }
    }
    cols
}

fn branch_table(name: &str, s: &Scenario, r: &Resolved, set: &plasmon_core::dynamics::EigenBranchSet) -> Result<ResultTable> {
    let names = branch_columns(&set.basis, set.branch_count());
    let cols: Vec<&str> = names.iter().map(String::as_str).collect();
    let summary = set.summary()?;
    let mut t = table(name, &cols, s, r)
        .meta("polariton_branches", format!("{} {}", summary.pair[0], summary.pair[1]))
        .meta("min_re_separation_ev", fmt_float(summary.min_re_separation.0))
        .meta("min_im_separation_ev", fmt_float(summary.min_im_separation.0))
        .meta("re_crossings", summary.re_crossings)
        .meta("im_crossings", summary.im_crossings);
    for (i, &x) in set.sweep.iter().enumerate() {
        let mut row = vec![x];
        for b in 0..set.branch_count() {
            let z = set.values[b][i];
            row.push(z.re);
            row.push(-2.0 * z.im);
            row.extend(&set.weights[b][i]);
        }
        t.push(row);
    }
    Ok(t)
}

pub fn fig4(s: &Scenario, common: &Common) -> Result<()> {
    let f = run_fig4(s)?;
    let p = f.at_resonance;
    let branches = branch_table("fig4_branches", s, &f.resolved, &f.branches)?
        .meta("splitting_ev", fmt_float(p.splitting.0))
        .meta("kappa_broad_ev", fmt_float(p.kappa_broad.0))
        .meta("kappa_narrow_ev", fmt_float(p.kappa_narrow.0))
        .meta("cooperativity", fmt_float(p.cooperativity));
    let mut names = vec!["detuning_pe_ev".to_string()];
    names.extend(f.spectra.iter().map(|(d, _)| format!("rad_ec_{}", fmt_float(*d))));
    let cols: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut spectra = table("fig4_spectra", &cols, s, &f.resolved);
    let totals: Vec<Vec<f64>> = f.spectra.iter().map(|(_, sp)| sp.total_radiative()).collect();
    for (i, &d) in f.spectra[0].1.detunings.iter().enumerate() {
        let mut row = vec![d];
        row.extend(totals.iter().map(|t| t[i]));
        spectra.push(row);
    }
    emit(common, &branches)?;
    emit(common, &spectra)
}

/// The scenario's main Hamiltonian and an automatic sweep half-width.
fn system(s: &Scenario, r: &Resolved) -> Result<(EffectiveHamiltonian, f64)> {
    if s.has_emitter() {
        let h = r.three_mode()?;
        let w = WINDOW_LINEWIDTHS * broadest_hybrid_width(&h)?;
        Ok((h, w))
    } else {
        Ok((r.two_mode()?, fig1c_half_width(r)))
    }
}

fn spectrum_table(name: &str, s: &Scenario, r: &Resolved, sp: &SpectrumResult, h: &EffectiveHamiltonian) -> Result<ResultTable> {
    let mut names = vec!["detuning_ev".to_string()];
    names.extend(h.channels.iter().map(|ch| format!("phi_{}", ch.id.as_str())));
    names.extend(["phi_rad_total".into(), "phi_ohm_total".into(), "eta".into()]);
    let cols: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut t = table(name, &cols, s, r).meta("drive", sp.driven.as_str());
    let (rad, ohm) = (sp.total_radiative(), sp.total_ohmic());
    for (i, st) in sp.states.iter().enumerate() {
        let mut row = vec![sp.detunings[i]];
        row.extend(h.channels.iter().map(|ch| st.power(ch.id)));
        let total = rad[i] + ohm[i];
        row.extend([rad[i], ohm[i], if total > 0.0 { rad[i] / total } else { f64::NAN }]);
        t.push(row);
    }
    Ok(t)
}

pub fn spectrum(s: &Scenario, common: &Common) -> Result<()> {
    let r = s.resolve()?;
    let (h, half) = system(s, &r)?;
    let grid = detuning_grid(s, half);
    let sp = emission_spectrum(&h, s.run.drive, &grid)?;
    emit(common, &spectrum_table("spectrum", s, &r, &sp, &h)?)
}

pub fn quantum_yield(s: &Scenario, common: &Common) -> Result<()> {
    need_emitter(s, "yield")?;
    let r = s.resolve()?;
    let (h, half) = system(s, &r)?;
    let grid = detuning_grid(s, half);
    let with = emission_spectrum(&h, s.run.drive, &grid)?;
    let bare = emission_spectrum(&r.without_cavity()?, s.run.drive, &grid)?;
    let p = fano_point(&r)?;
    let mut t = table("yield", &["detuning_ev", "eta_cavity", "eta_bare"], s, &r)
        .meta("drive", s.run.drive.as_str())
        .meta("yield_enhancement_at_delta0", fmt_float(p.yield_enhancement()))
        .meta("power_enhancement_at_delta0", fmt_float(p.power_enhancement()));
    let (a, b) = (with.yields()?, bare.yields()?);
    for (i, &d) in grid.iter().enumerate() {
        t.push(vec![d, a[i], b[i]]);
    }
    emit(common, &t)
}

pub fn evolve(s: &Scenario, common: &Common) -> Result<()> {
    let r = s.resolve()?;
    let (h, _) = system(s, &r)?;
    let i = h
        .index_of(s.run.drive)
        .ok_or_else(|| Error::Domain(format!("{} is not part of this scenario", s.run.drive.as_str())))?;
    let mut v0 = CVector::zeros(h.dim());
    v0[i] = c(1.0, 0.0);
    let times = default_time_grid(&h, s.run.time_spans, s.run.time_points)?;
    let trace = run_evolve(&h, &v0, &times)?;
    let mut names = vec!["time_fs".to_string()];
    names.extend(trace.basis.iter().map(|l| format!("pop_{}", l.as_str())));
    names.push("pop_total".into());
    let cols: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut t = table("evolve", &cols, s, &r).meta("initial", s.run.drive.as_str());
    let total = trace.total();
    for (k, &time) in trace.times_fs.iter().enumerate() {
        let mut row = vec![time];
        row.extend(trace.populations.iter().map(|p| p[k]));
        row.push(total[k]);
        t.push(row);
    }
    emit(common, &t)
}

pub fn eigen(s: &Scenario, common: &Common) -> Result<()> {
    need_emitter(s, "eigen")?;
    let r = s.resolve()?;
    let sweep = detuning_grid(s, default_spectral_half_width(&r));
    let set = eigen_branches(|x| at_emitter_cavity_detuning(&r, x), &sweep)?;
    emit(common, &branch_table("eigen", s, &r, &set)?)
}

pub fn map(s: &Scenario, common: &Common) -> Result<()> {
    need_emitter(s, "map")?;
    let r = s.resolve()?;
    let grid = default_map(s)?;
    let mut t = table("map", &["distance_nm", "q", "yield_enhancement", "power_enhancement"], s, &r);
    for (d, q, y, p) in grid.rows() {
        t.push(vec![d, q, y, p]);
    }
    emit(common, &t)
}

pub fn optq(s: &Scenario, common: &Common, distances: &[f64], objective: ObjectiveArg) -> Result<()> {
    need_emitter(s, "optq")?;
    let r = s.resolve()?;
    let objective = match objective {
        ObjectiveArg::Yield => Objective::Yield,
        ObjectiveArg::Power => Objective::Power,
    };
    let name = match objective {
        Objective::Yield => "yield",
        Objective::Power => "power",
    };
    let mut t = table("optq", &["distance_nm", "q_opt", "enhancement", "interior"], s, &r).meta("objective", name);
    for &d in distances {
        let o = optimal_q(s, d, objective)?;
        t.push(vec![d, o.q, o.value, if o.interior { 1.0 } else { 0.0 }]);
    }
    emit(common, &t)
}

pub fn validate(s: &Scenario) -> Result<()> {
    let r = s.resolve()?;
    println!("scenario {}", s.name);
    for (k, v, p) in r.parameter_table() {
        println!("{k:<32} {:>16}  {p}", fmt_float(v));
    }
    for (k, v) in &r.diagnostics {
        println!("{k:<32} {:>16}  diagnostic", fmt_float(*v));
    }
    for w in s.particle.warnings() {
        println!("warning: {w}");
    }
    Ok(())
}
