#![allow(dead_code)]

use plasmon_core::couplings::CouplingSet;
use plasmon_core::network::{Rates, ThreeModeParams};
use plasmon_core::quantities::Energy;
use proptest::prelude::*;

pub const OMEGA_SPHERE: f64 = 2.309_401_076_758_503;

pub fn fig2_params(q: f64) -> ThreeModeParams {
    ThreeModeParams {
        plasmon_detuning: Energy::ZERO,
        cavity_detuning: Energy::ZERO,
        rates: Rates {
            plasmon_radiative: Energy::mev(2.45),
            plasmon_ohmic: Energy(0.2),
            cavity: Energy(OMEGA_SPHERE / q),
            emitter_radiative: Energy::uev(3.0),
            emitter_quench: Energy::uev(83.0),
        },
        couplings: CouplingSet {
            plasmon_cavity: Energy::mev(-2.9),
            plasmon_emitter: Energy::uev(-7200.0),
            cavity_emitter: Energy::uev(-144.0),
        },
    }
}

fn rate(lo: f64, hi: f64) -> impl Strategy<Value = Energy> {
    let hi = hi.max(10.0 * lo);
    (lo.ln()..hi.ln()).prop_map(|x| Energy(x.exp()))
}

fn signed(max: f64) -> impl Strategy<Value = Energy> {
    (-max..max).prop_map(Energy)
}

/// Random valid three-mode systems with every width strictly positive.
pub fn random_system(min_width: f64) -> impl Strategy<Value = ThreeModeParams> {
    (
        signed(0.5),
        signed(0.02),
        (rate(min_width, 0.01), rate(min_width, 0.3), rate(min_width, 0.01), rate(min_width, 1e-3), rate(min_width, 1e-3)),
        (signed(0.01), signed(0.01), signed(0.01)),
    )
        .prop_map(|(d1, dc, (r1, o1, c, s, m), (g1, g, j))| ThreeModeParams {
            plasmon_detuning: d1,
            cavity_detuning: dc,
            rates: Rates {
                plasmon_radiative: r1,
                plasmon_ohmic: o1,
                cavity: c,
                emitter_radiative: s,
                emitter_quench: m,
            },
            couplings: CouplingSet {
                plasmon_cavity: g1,
                plasmon_emitter: g,
                cavity_emitter: j,
            },
        })
}
