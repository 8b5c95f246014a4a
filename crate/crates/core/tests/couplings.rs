use plasmon_core::couplings::{
    dipole_dipole_coupling, free_space_decay, multipole_quench_rate, plasmon_effective_dipole, project_couplings,
    vacuum_coupling, CalibratedQuench, DipoleGeometry, Orientation,
};
use plasmon_core::materials::{
    depolarization_factors, dipolar_mode, dipolar_radiative_rate, DrudeMetal, Environment, Nanoparticle,
};
use plasmon_core::quantities::{DipoleMoment, Energy, Length, COULOMB, HBAR_C};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

#[test]
fn ellipsoid_chain() {
    let p = Nanoparticle::ellipsoid([Length(33.0), Length(5.5), Length(5.5)], DrudeMetal::gold()).unwrap();
    let env = Environment::vacuum();
    // Prolate-spheroid closed form for the long-axis factor.
    let e: f64 = (1.0 - (5.5f64 / 33.0).powi(2)).sqrt();
    let l_oracle = (1.0 - e * e) / (e * e) * (((1.0 + e) / (1.0 - e)).ln() / (2.0 * e) - 1.0);
    let l = depolarization_factors([Length(33.0), Length(5.5), Length(5.5)]).unwrap();
    assert!((l[0] - l_oracle).abs() < 1e-10);
    let mode = dipolar_mode(&p, &env).unwrap();
    assert!((mode.omega.0 - 4.0 * l_oracle.sqrt()).abs() < 1e-9);
    let mu = plasmon_effective_dipole(mode.gamma_rad, mode.omega).unwrap();
    assert!((mu.0 - 33.3).abs() < 1.0, "{}", mu.0);
}

#[test]
fn effective_dipole_inverts_radiative_rate() {
    let mu = plasmon_effective_dipole(Energy::mev(2.45), Energy(2.309)).unwrap();
    // The oscillator convention for μ₁ carries twice the emitter rate.
    let back = free_space_decay(mu, Energy(2.309), 1.0).unwrap();
    assert!(rel(2.0 * back.0, 2.45e-3) < 1e-12);
    // μ₁ / μ_e equals g₁/J for the caption values within 1%.
    assert!(rel(mu.0, 2900.0 / 144.0) < 0.01);
}

#[test]
fn calibrated_quench_hits_reference() {
    let p = Nanoparticle::sphere(Length(10.0), DrudeMetal::gold()).unwrap();
    let env = Environment::vacuum();
    let cq = CalibratedQuench::new(
        DipoleMoment(1.0),
        Orientation::Radial,
        p,
        env,
        Energy(2.309),
        Length(10.0),
        Energy::uev(83.0),
    )
    .unwrap();
    assert!(rel(cq.rate(Length(10.0)).unwrap().as_uev(), 83.0) < 1e-12);
    let raw = |d| multipole_quench_rate(DipoleMoment(1.0), Orientation::Radial, &p, &env, Length(d), Energy(2.309)).unwrap();
    let scale = 83e-6 / raw(10.0).0;
    assert!(rel(cq.rate(Length(5.0)).unwrap().0, scale * raw(5.0).0) < 1e-12);
    assert!(cq.rate(Length(5.0)).unwrap() > cq.rate(Length(15.0)).unwrap());
}

#[test]
fn projection_example() {
    let (g, g1) = project_couplings(Energy::mev(-7.2), Energy::mev(-2.9), 60f64.to_radians()).unwrap();
    assert!((g.as_mev() + 3.6).abs() < 1e-9);
    assert!((g1.as_mev() + 2.9 * 3f64.sqrt() / 2.0).abs() < 1e-9);
    assert!(project_couplings(Energy(1.0), Energy(1.0), 2.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn vacuum_coupling_scales_as_inverse_root_volume(mu in 0.1f64..50.0, w in 0.1f64..5.0, v in 1e6f64..1e11, k in 1.1f64..100.0) {
        let a = vacuum_coupling(DipoleMoment(mu), Energy(w), v, 1.0).unwrap();
        let b = vacuum_coupling(DipoleMoment(mu), Energy(w), k * v, 1.0).unwrap();
        prop_assert!(rel(a.0 / b.0, k.sqrt()) < 1e-12);
        // Independent closed form: μ √(2π C ω / (ε_b V)).
        prop_assert!(rel(a.0, mu * (2.0 * std::f64::consts::PI * COULOMB * w / v).sqrt()) < 1e-12);
    }

    #[test]
    fn dipole_coupling_scales_as_inverse_cube(ma in 0.1f64..50.0, mb in 0.1f64..5.0, d in 2.0f64..100.0, k in 1.1f64..10.0) {
        for geom in [DipoleGeometry::Longitudinal, DipoleGeometry::Transverse] {
            let a = dipole_dipole_coupling(DipoleMoment(ma), DipoleMoment(mb), Length(d), 1.0, geom).unwrap();
            let b = dipole_dipole_coupling(DipoleMoment(ma), DipoleMoment(mb), Length(k * d), 1.0, geom).unwrap();
            prop_assert!(rel(a.0 / b.0, k.powi(3)) < 1e-12);
        }
        let lon = dipole_dipole_coupling(DipoleMoment(ma), DipoleMoment(mb), Length(d), 1.0, DipoleGeometry::Longitudinal).unwrap();
        let tra = dipole_dipole_coupling(DipoleMoment(ma), DipoleMoment(mb), Length(d), 1.0, DipoleGeometry::Transverse).unwrap();
        prop_assert!(rel(lon.0 / tra.0, -2.0) < 1e-12);
    }

    #[test]
    fn free_space_decay_scales_with_dipole_and_frequency(mu in 0.1f64..20.0, w in 0.1f64..5.0, k in 1.1f64..10.0) {
        let base = free_space_decay(DipoleMoment(mu), Energy(w), 1.0).unwrap();
        let big_mu = free_space_decay(DipoleMoment(k * mu), Energy(w), 1.0).unwrap();
        let big_w = free_space_decay(DipoleMoment(mu), Energy(k * w), 1.0).unwrap();
        prop_assert!(rel(big_mu.0 / base.0, k * k) < 1e-12);
        prop_assert!(rel(big_w.0 / base.0, k.powi(3)) < 1e-12);
        let kv = w / HBAR_C;
        prop_assert!(rel(base.0, 4.0 / 3.0 * kv.powi(3) * mu * mu * COULOMB) < 1e-12);
    }

    #[test]
    fn radiative_rate_scales_with_volume(r in 1.0f64..15.0, k in 1.1f64..2.0) {
        let env = Environment::vacuum();
        let a = dipolar_radiative_rate(&Nanoparticle::sphere(Length(r), DrudeMetal::gold()).unwrap(), &env).unwrap();
        let b = dipolar_radiative_rate(&Nanoparticle::sphere(Length(k * r), DrudeMetal::gold()).unwrap(), &env).unwrap();
        prop_assert!(rel(b.0 / a.0, k.powi(3)) < 1e-10);
    }

    #[test]
    fn quench_rate_scales_with_dipole_squared(mu in 0.1f64..10.0, d in 2.0f64..30.0, k in 1.1f64..5.0) {
        let p = Nanoparticle::sphere(Length(10.0), DrudeMetal::gold()).unwrap();
        let env = Environment::vacuum();
        for o in [Orientation::Radial, Orientation::Tangential] {
            let a = multipole_quench_rate(DipoleMoment(mu), o, &p, &env, Length(d), Energy(2.309)).unwrap();
            let b = multipole_quench_rate(DipoleMoment(k * mu), o, &p, &env, Length(d), Energy(2.309)).unwrap();
            prop_assert!(rel(b.0 / a.0, k * k) < 1e-10);
        }
    }
}
