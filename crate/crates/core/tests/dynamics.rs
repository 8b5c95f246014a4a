mod common;

use common::{fig2_params, random_system, OMEGA_SPHERE};
use num_complex::Complex64;
use plasmon_core::couplings::CouplingSet;
use plasmon_core::dynamics::*;
use plasmon_core::linalg::{c, eigen, CVector};
use plasmon_core::network::*;
use plasmon_core::numerics::{golden_section_max, linear_grid};
use plasmon_core::quantities::{Energy, HBAR_EV_FS};
use plasmon_core::Error;
use proptest::prelude::*;

fn sphere_rates(q: f64) -> Rates {
    Rates {
        plasmon_radiative: Energy::mev(2.45),
        plasmon_ohmic: Energy(0.2),
        cavity: Energy(OMEGA_SPHERE / q),
        ..Rates::default()
    }
}

#[test]
fn uncoupled_plasmon_on_resonance() {
    let rates = sphere_rates(1e5);
    let h = build_two_mode(Energy::ZERO, &rates, Energy::ZERO).unwrap();
    let s = steady_state(&h, &DriveSpec::unit(ModeLabel::PlasmonDipole, Energy::ZERO)).unwrap();
    let g1 = rates.plasmon_total().0;
    assert!((s.population(ModeLabel::PlasmonDipole) - 4.0 / (g1 * g1)).abs() < 1e-12 * 4.0 / (g1 * g1));
    let ratio = s.power(ChannelId::Ohm1) / s.power(ChannelId::Rad1);
    assert!((ratio - 0.2 / 2.45e-3).abs() < 1e-9);
    assert!((ratio - 81.7).abs() < 0.1);
}

#[test]
fn cavity_suppresses_plasmon_population() {
    let rates = sphere_rates(1e5);
    let g1 = 2.9e-3;
    let with = build_two_mode(Energy(g1), &rates, Energy::ZERO).unwrap();
    let bare = build_bare_plasmon(&rates, Energy::ZERO).unwrap();
    let drive = DriveSpec::unit(ModeLabel::PlasmonDipole, Energy::ZERO);
    let a = steady_state(&with, &drive).unwrap().population(ModeLabel::PlasmonDipole);
    let b = steady_state(&bare, &drive).unwrap().population(ModeLabel::PlasmonDipole);
    let gp = rates.plasmon_total().0;
    let shift = 4.0 * g1 * g1 / rates.cavity.0;
    assert!((shift - 1.4567).abs() < 1e-3);
    let expected = (gp / (gp + shift)).powi(2);
    assert!((a / b - expected).abs() < 1e-12, "{} vs {expected}", a / b);
    assert!((expected - 0.0149).abs() < 1e-4);
}

#[test]
fn zero_drive_and_undefined_yield() {
    let h = build_three_mode(&fig2_params(1e5)).unwrap();
    let drive = DriveSpec {
        mode: ModeLabel::Emitter,
        amplitude: 0.0,
        detuning: Energy::ZERO,
    };
    let s = steady_state(&h, &drive).unwrap();
    assert!(s.amplitudes.iter().all(|z| *z == c(0.0, 0.0)));
    assert!(matches!(quantum_yield(&s), Err(Error::UndefinedYield)));
}

#[test]
fn lossless_absorbers_give_unit_yield() {
    let mut p = fig2_params(1e5);
    p.rates.plasmon_ohmic = Energy::ZERO;
    p.rates.emitter_quench = Energy::ZERO;
    let h = build_three_mode(&p).unwrap();
    let s = steady_state(&h, &DriveSpec::unit(ModeLabel::Emitter, Energy::uev(20.0))).unwrap();
    assert_eq!(quantum_yield(&s).unwrap(), 1.0);
}

#[test]
fn fully_lossless_system_is_rejected_on_resonance() {
    let h = build_two_mode(Energy::ZERO, &Rates::default(), Energy::ZERO).unwrap();
    let err = steady_state(&h, &DriveSpec::unit(ModeLabel::Cavity, Energy::ZERO)).unwrap_err();
    assert!(matches!(err, Error::Conditioning(_)));
}

#[test]
fn driving_absent_mode_is_an_error() {
    let h = build_two_mode(Energy::ZERO, &sphere_rates(1e5), Energy::ZERO).unwrap();
    assert!(steady_state(&h, &DriveSpec::unit(ModeLabel::Emitter, Energy::ZERO)).is_err());
}

#[test]
fn fano_detuning_examples() {
    let d0 = fano_detuning(Energy::uev(-144.0), Energy::mev(-2.9), Energy::mev(-7.2)).unwrap();
    assert!((d0.as_uev() - 58.0).abs() < 1e-9);
    assert_eq!(fano_detuning(Energy::ZERO, Energy::mev(-2.9), Energy::mev(-7.2)).unwrap().0, 0.0);
    let flipped = fano_detuning(Energy::uev(-144.0), Energy::mev(-2.9), Energy::mev(7.2)).unwrap();
    assert_eq!(flipped.0, -d0.0);
    assert!(matches!(
        fano_detuning(Energy::uev(-144.0), Energy::mev(-2.9), Energy::ZERO),
        Err(Error::Domain(_))
    ));
}

#[test]
fn far_detuned_drive_is_negligible() {
    let h = build_three_mode(&fig2_params(1e5)).unwrap();
    let on = steady_state(&h, &DriveSpec::unit(ModeLabel::Emitter, Energy::ZERO)).unwrap();
    // 100× the largest width or coupling.
    let far = steady_state(&h, &DriveSpec::unit(ModeLabel::Emitter, Energy(100.0 * 0.20245))).unwrap();
    for (a, b) in far.channels.iter().zip(&on.channels) {
        assert!(a.power < 1e-4 * b.power, "{:?} {} vs {}", a.id, a.power, b.power);
    }
}

#[test]
fn fano_minimum_without_cavity_emitter_coupling() {
    // Holds while the cavity line is narrower than the emitter (γ_c < γ_e).
    for q in [1e5, 3e5, 1e6] {
        let mut p = fig2_params(q);
        p.couplings.cavity_emitter = Energy::ZERO;
        let h = build_three_mode(&p).unwrap();
        let d0 = fano_detuning(p.couplings.cavity_emitter, p.couplings.plasmon_cavity, p.couplings.plasmon_emitter)
            .unwrap()
            .0;
        let gc = p.rates.cavity.0;
        let pop = |d: f64| {
            steady_state(&h, &DriveSpec::unit(ModeLabel::Emitter, Energy(d)))
                .unwrap()
                .population(ModeLabel::PlasmonDipole)
        };
        let (x, _) = golden_section_max(|d| -pop(d), d0 - 5.0 * gc, d0 + 5.0 * gc, 1e-4 * gc);
        assert!((x - d0).abs() <= 0.5 * gc, "Q={q}: min at {x}, Δ₀={d0}, γ_c={gc}");
        // Oracle: brute-force grid agrees with the refined minimum.
        let grid = linear_grid(d0 - 5.0 * gc, d0 + 5.0 * gc, 20_001);
        let best = grid.iter().cloned().min_by(|a, b| pop(*a).total_cmp(&pop(*b))).unwrap();
        assert!((best - x).abs() <= 2.0 * (grid[1] - grid[0]));
    }
}

#[test]
fn pure_decay_of_uncoupled_emitter() {
    let mut p = fig2_params(1e5);
    p.couplings = CouplingSet::default();
    let h = build_three_mode(&p).unwrap();
    let v0 = CVector::from_vec(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    let times = linear_grid(0.0, 20_000.0, 101);
    let trace = evolve(&h, &v0, &times).unwrap();
    let ge = p.rates.emitter_total().0;
    for (t, pop) in times.iter().zip(trace.population(ModeLabel::Emitter).unwrap()) {
        let exact = (-ge * t / HBAR_EV_FS).exp();
        assert!((pop - exact).abs() < 1e-13, "{pop} vs {exact}");
    }
}

#[test]
fn vacuum_rabi_period() {
    let g = 1e-3;
    let h = build_two_mode(Energy(g), &Rates::default(), Energy::ZERO).unwrap();
    let v0 = CVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)]);
    let period = std::f64::consts::PI / g;
    let times: Vec<f64> = [0.0, 0.25, 0.5, 1.0].iter().map(|f| f * period * HBAR_EV_FS).collect();
    let trace = evolve(&h, &v0, &times).unwrap();
    let cav = trace.population(ModeLabel::Cavity).unwrap();
    assert!((cav[1] - 0.5).abs() < 1e-12);
    assert!(cav[2].abs() < 1e-12);
    assert!((cav[3] - 1.0).abs() < 1e-12);
}

#[test]
fn time_grid_validation() {
    let h = build_three_mode(&fig2_params(1e5)).unwrap();
    let v0 = CVector::from_vec(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    assert!(evolve(&h, &v0, &[]).is_err());
    assert!(evolve(&h, &v0, &[0.0, 2.0, 1.0]).is_err());
    assert!(evolve(&h, &v0, &[-1.0, 1.0]).is_err());
    let grid = default_time_grid(&h, 10.0, 4096).unwrap();
    assert_eq!(grid.len(), 4096);
    assert_eq!(grid[0], 0.0);
}

#[test]
fn zero_coupling_branches_cross_as_straight_lines() {
    let mut p = fig2_params(1e4);
    p.couplings = CouplingSet::default();
    p.plasmon_detuning = Energy(0.6);
    let sweep = linear_grid(-10e-3, 10e-3, 21);
    let set = eigen_branches(
        |d| {
            let mut q = p;
            q.cavity_detuning = Energy(-d);
            build_three_mode(&q)
        },
        &sweep,
    )
    .unwrap();
    assert_eq!(set.branch_count(), 3);
    // The cavity branch keeps its identity: Re λ = −Δ_e,c exactly.
    let cav = (0..3)
        .find(|&b| set.weights[b][0][1] > 0.99)
        .expect("cavity branch");
    for (x, l) in sweep.iter().zip(&set.values[cav]) {
        assert!((l.re + x).abs() < 1e-15);
        assert!((l.im + 0.5 * p.rates.cavity.0).abs() < 1e-15);
    }
    let s = set.summary().unwrap();
    assert_eq!(s.re_crossings, 1);
    assert!(s.min_re_separation.0 < 1e-15);
}

#[test]
fn hermitian_anti_crossing() {
    let g = 2e-3;
    let sweep = linear_grid(-10e-3, 10e-3, 41);
    let set = eigen_branches(|d| build_two_mode(Energy(g), &Rates::default(), Energy(d)), &sweep).unwrap();
    let s = set.summary().unwrap();
    assert_eq!(s.re_crossings, 0);
    for (k, &d) in sweep.iter().enumerate() {
        let sep = (set.values[0][k].re - set.values[1][k].re).abs();
        assert!((sep - (d * d + 4.0 * g * g).sqrt()).abs() < 1e-14);
        for b in 0..2 {
            assert!(set.linewidths(b)[k].abs() < 1e-15);
        }
    }
    assert!((s.min_re_separation.0 - 2.0 * g).abs() < 1e-14);
    let pair = polariton_pair(&build_two_mode(Energy(g), &Rates::default(), Energy::ZERO).unwrap()).unwrap();
    assert!((pair.splitting.0 - 2.0 * g).abs() < 1e-15);
}

#[test]
fn branch_tracking_follows_eigenvectors_not_order() {
    // Two weakly coupled lossy modes whose real parts swap order.
    let rates = Rates {
        plasmon_ohmic: Energy::mev(1.0),
        cavity: Energy::mev(0.1),
        ..Rates::default()
    };
    let sweep = linear_grid(-5e-3, 5e-3, 101);
    let set = eigen_branches(|d| build_two_mode(Energy::uev(1.0), &rates, Energy(d)), &sweep).unwrap();
    for b in 0..2 {
        let w = set.linewidths(b);
        let spread = w.iter().cloned().fold(f64::MIN, f64::max) - w.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 1e-5, "branch {b} swapped identity");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn power_balance(p in random_system(1e-6), drive in 0usize..3, dp in -0.05f64..0.05) {
        let h = build_three_mode(&p).unwrap();
        let s = steady_state(&h, &DriveSpec::unit(h.basis[drive], Energy(dp))).unwrap();
        let balance = (s.dissipated() - s.injected).abs() / s.injected;
        prop_assert!(balance < 1e-9, "relative imbalance {balance}");
        let widths = h.widths();
        let diag: f64 = s.amplitudes.iter().zip(&widths).map(|(v, g)| g * v.norm_sqr()).sum();
        prop_assert!((diag - s.dissipated()).abs() <= 1e-12 * diag);
        for ch in &s.channels {
            prop_assert!(ch.power >= 0.0);
        }
    }

    #[test]
    fn symmetric_and_trace(p in random_system(1e-6)) {
        for h in [build_three_mode(&p).unwrap(), build_without_cavity(&p).unwrap()] {
            prop_assert!(h.is_symmetric());
            let e = eigen(&h.matrix).unwrap();
            let trace: Complex64 = (0..h.dim()).map(|i| h.matrix[(i, i)]).sum();
            let sum: Complex64 = e.values.iter().sum();
            let scale = (0..h.dim()).map(|i| h.matrix[(i, i)].norm()).sum::<f64>();
            prop_assert!((trace - sum).norm() <= 1e-12 * scale);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exponential_matches_adaptive_integrator(p in random_system(1e-3), start in 0usize..3) {
        let h = build_three_mode(&p).unwrap();
        let mut v0 = CVector::zeros(3);
        v0[start] = c(1.0, 0.0);
        let times = default_time_grid(&h, 5.0, 64).unwrap();
        let a = evolve(&h, &v0, &times).unwrap();
        let b = evolve_rk45(&h, &v0, &times, 1e-11, 1e-13).unwrap();
        for (x, y) in a.populations.iter().zip(&b.populations) {
            for (u, w) in x.iter().zip(y) {
                prop_assert!((u - w).abs() < 1e-8, "{u} vs {w}");
            }
        }
    }

    #[test]
    fn population_decays_monotonically(p in random_system(1e-5), re in -1f64..1.0, im in -1f64..1.0) {
        let h = build_three_mode(&p).unwrap();
        let v0 = CVector::from_vec(vec![c(re, im), c(im, 0.3), c(1.0, re)]);
        let v0 = &v0 / c(v0.norm(), 0.0);
        let times = default_time_grid(&h, 3.0, 256).unwrap();
        let total = evolve(&h, &v0, &times).unwrap().total();
        for w in total.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12), "{} -> {}", w[0], w[1]);
        }
        // Initial slope equals −Σ γ_i |v_i(0)|².
        let dt = 1e-4 / plasmon_core::linalg::one_norm(&h.matrix);
        let n1 = propagate(&h, &v0, dt).norm_squared();
        let n2 = propagate(&h, &v0, -dt).norm_squared();
        let slope = (n1 - n2) / (2.0 * dt);
        let expected: f64 = -h.widths().iter().zip(v0.iter()).map(|(g, v)| g * v.norm_sqr()).sum::<f64>();
        prop_assert!((slope - expected).abs() <= 1e-6 * expected.abs(), "{slope} vs {expected}");
    }
}
