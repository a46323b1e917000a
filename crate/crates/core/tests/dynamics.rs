mod support;

use std::f64::consts::{PI, SQRT_2};

use proptest::prelude::*;
use qtransfer_core::bloch2::*;
use qtransfer_core::cavity4::{self, *};
use qtransfer_core::integrator::{integrate, IntegratorConfig};
use qtransfer_core::lambda3::*;
use qtransfer_core::pulses::{pulse_area, PulseSpec, Shape};
use qtransfer_core::twoatom::*;
use support::*;

fn tight() -> IntegratorConfig {
    IntegratorConfig::with_tolerances(1e-11, 1e-13)
}

fn shape() -> impl Strategy<Value = Shape> {
    prop_oneof![Just(Shape::Gaussian), Just(Shape::Sech), Just(Shape::Lorentzian)]
}

fn unit_vector() -> impl Strategy<Value = [f64; 3]> {
    (0.0f64..PI, -PI..PI).prop_map(|(a, b)| [a.sin() * b.cos(), a.sin() * b.sin(), a.cos()])
}

fn mat_vec<const N: usize>(m: &[[f64; N]; N], v: &[f64; N]) -> [f64; N] {
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = (0..N).map(|j| m[i][j] * v[j]).sum();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resonant_pseudospin_follows_rotation(sh in shape(), amp in 0.2f64..6.0, w in 0.3f64..2.0, s in unit_vector()) {
        let p = PulseSpec { shape: sh, amplitude: amp, width: w, center: 0.0 };
        let win = (-12.0 * w, 12.0 * w);
        let s0 = PseudospinState::new(s[0], s[1], s[2]);
        let got = simulate_two_level(&TorqueSpec { pulse: p, detuning: 0.0 }, win, &s0, &tight()).unwrap();
        let expected = rotation_solution(pulse_area(&p, win.0, win.1), &s0);
        prop_assert!(got.max_abs_diff(&expected) < 1e-6, "{got:?} vs {expected:?}");
    }

    #[test]
    fn detuned_pseudospin_keeps_its_length(amp in 0.2f64..6.0, det in -4.0f64..4.0, s in unit_vector()) {
        let p = PulseSpec::gaussian(amp, 1.0, 0.0);
        let s0 = PseudospinState::new(s[0], s[1], s[2]);
        let got = simulate_two_level(&TorqueSpec { pulse: p, detuning: det }, (-8.0, 8.0), &s0, &tight()).unwrap();
        prop_assert!((got.norm() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn lambda_evolution_is_unitary(sh in shape(), a1 in 0.5f64..10.0, a2 in 0.5f64..10.0, d in 0.0f64..3.0, d1 in -2.0f64..2.0, d2 in -2.0f64..2.0) {
        let p1 = PulseSpec { shape: sh, amplitude: a1, width: 1.0, center: d };
        let p2 = PulseSpec { shape: sh, amplitude: a2, width: 1.0, center: 0.0 };
        let r = transfer_from(&p1, &p2, d1, d2, Some(short_window(&p1, &p2)), Lambda3State::real(1.0, 0.0, 0.0), Level::B, &tight(), None).unwrap();
        prop_assert!(r.trace_drift.abs() < 1e-8);
    }

    #[test]
    fn dressed_states_are_eigenvectors(o1 in -10.0f64..10.0, o2 in -10.0f64..10.0) {
        prop_assume!(o1.hypot(o2) > 1e-3);
        let b = dressed_states(o1, o2).unwrap();
        let h = resonant_hamiltonian(o1, o2);
        for (v, w) in [(b.w_plus, b.omega_plus), (b.w_zero, b.omega_zero), (b.w_minus, b.omega_minus)] {
            let hv = mat_vec(&h, &v);
            for i in 0..3 {
                prop_assert!((hv[i] - w * v[i]).abs() < 1e-12);
            }
            prop_assert!((v.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-14);
        }
        let dot: f64 = (0..3).map(|i| b.w_plus[i] * b.w_minus[i]).sum();
        prop_assert!(dot.abs() < 1e-14);
    }

    #[test]
    fn four_level_trace_derivative_vanishes(rho in prop::array::uniform8(-1.0f64..1.0), om in 0.0f64..10.0, g in 0.0f64..10.0, gamma in 0.0f64..2.0, kappa in 0.0f64..2.0) {
        let cfg = Cavity4Config {
            pulse_omega: PulseSpec::constant(om),
            pulse_g: PulseSpec::constant(g),
            gamma,
            kappa,
            window: None,
            target: TargetConvention::AnyG0,
        };
        let d = cavity4_rhs(&cfg, 0.0, &rho);
        prop_assert!(cavity4::trace(&d).abs() < 1e-12);
    }

    #[test]
    fn decoupled_state_does_not_move(om in 0.01f64..10.0, g in 0.01f64..10.0, gamma in 0.0f64..2.0) {
        let cfg = Cavity4Config {
            pulse_omega: PulseSpec::constant(om),
            pulse_g: PulseSpec::constant(g),
            gamma,
            kappa: 0.0,
            window: None,
            target: TargetConvention::AnyG0,
        };
        let d = cavity4_rhs(&cfg, 0.0, &decoupled_state(om, g).unwrap());
        prop_assert!(d.iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn two_atom_trace_leaks_through_excited_states(rho in prop::collection::vec(-1.0f64..1.0, 25), o1 in 0.0f64..10.0, o2 in 0.0f64..10.0, g in 0.0f64..10.0, gamma in 0.0f64..2.0) {
        let rho: [f64; 25] = rho.try_into().unwrap();
        let d = rho25_rhs(&PulseSpec::constant(o1), &PulseSpec::constant(o2), g, gamma, 0.0, &rho);
        let expected = -gamma / 3.0 * (rho[rho_index(CB, CB)] + rho[rho_index(BC, BC)]);
        prop_assert!((rho_trace(&d) - expected).abs() < 1e-10);
    }

    #[test]
    fn two_atom_dark_state_is_null_vector(o1 in 0.01f64..10.0, o2 in 0.01f64..10.0, g in 0.01f64..10.0, gamma in 0.0f64..2.0) {
        let v = embed_dark(&dark_state(o1, o2, g).unwrap());
        let hv = mat_vec(&amp5_matrix(o1, o2, g, gamma), &v);
        prop_assert!(hv.iter().all(|x| x.abs() < 1e-14));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn pure_density_tracks_amplitudes(a1 in 0.5f64..5.0, a2 in 0.5f64..5.0, g in 0.5f64..4.0, d in 0.0f64..3.0) {
        let p1 = gaussian(a1, 1.0, d);
        let p2 = gaussian(a2, 1.0, 0.0);
        let w = short_window(&p1, &p2);
        let mut c0 = [0.0; 5];
        c0[AB] = 1.0;
        let amps = integrate(|t, y, dy| dy.copy_from_slice(&amp5_rhs(&p1, &p2, g, 0.0, t, y.try_into().unwrap())), w.0, w.1, &c0, &tight(), Some(0.5)).unwrap();
        let rho = integrate(|t, y, dy| dy.copy_from_slice(&rho25_rhs(&p1, &p2, g, 0.0, t, y.try_into().unwrap())), w.0, w.1, &rho_from_amplitudes(&c0), &tight(), Some(0.5)).unwrap();
        prop_assert_eq!(amps.times.len(), rho.times.len());
        for (c, r) in amps.states.iter().zip(&rho.states) {
            for i in 0..5 {
                prop_assert!((c[i] * c[i] - r[rho_index(i, i)]).abs() < 1e-6);
            }
        }
    }
}

#[test]
fn constant_pi_pulse_inverts_to_high_accuracy() {
    let s = simulate_two_level(
        &TorqueSpec { pulse: PulseSpec::constant(1.0), detuning: 0.0 },
        (0.0, PI),
        &PseudospinState::GROUND,
        &IntegratorConfig::default(),
    )
    .unwrap();
    assert!((s.w - 1.0).abs() < 1e-7);
}

#[test]
fn sincos_pair_at_first_zero_transfers() {
    // Expected to fail: the exact dynamics give p ≈ 0.10 from the dark state and ≈ 0.91 from (1, 0, 0).
    let a = 4.0;
    let p1 = PulseSpec { shape: Shape::SinWindow, amplitude: a, width: 1.0, center: 0.0 };
    let p2 = PulseSpec { shape: Shape::CosWindow, amplitude: a, width: 1.0, center: 0.0 };
    let r = stirap_transfer(&p1, &p2, 0.0, 0.0, Some((-PI / 2.0, PI / 2.0)), &IntegratorConfig::default()).unwrap();
    assert!(r.p < 1e-4, "p = {}", r.p);
}

fn cavity_row(protocol: Protocol, shape: Shape, v: [f64; 6]) -> f64 {
    let [gamma, om, s, g, sg, dt] = v;
    let cfg = Cavity4Config::for_protocol(
        protocol,
        PulseSpec { shape, amplitude: om, width: s, center: 0.0 },
        PulseSpec { shape, amplitude: g, width: sg, center: 0.0 },
        dt,
        gamma,
        0.0,
    );
    cavity4::transfer(&cfg, &IntegratorConfig::default(), None).unwrap().log10_p
}

#[test]
fn adiabatic_rows() {
    let sech = cavity_row(Protocol::Adiabatic, Shape::Sech, [0.0, 2.0, 1.0, 2.0, 1.0, 0.8]);
    assert!((sech + 7.79).abs() < 1.0, "{sech}");
    let lossy = cavity_row(Protocol::Adiabatic, Shape::Gaussian, [0.1, 2.75, 3.09, 1.0, 2.48, 5.29]);
    assert!((lossy + 2.00).abs() < 0.3, "{lossy}");
}

#[test]
fn pi_pulse_rows() {
    for (shape, v, expected) in [
        (Shape::Gaussian, [0.01, 2.14, 0.29, 1.0, 0.63, 1.26], -2.05),
        (Shape::Sech, [0.2, 2.43, 0.21, 1.0, 0.5, 0.77], -0.91),
        (Shape::Lorentzian, [0.01, 5.71, 0.09, 1.0, 0.5, 2.28], -1.63),
    ] {
        let got = cavity_row(Protocol::Pi, shape, v);
        assert!((got - expected).abs() < 0.3, "{shape:?}: {got} vs {expected}");
    }
}

#[test]
fn coherence_row_sech() {
    let cfg =
        TwoAtomConfig::counterintuitive(Model::Density, PulseSpec::sech(3.8, 4.4, 0.0), PulseSpec::sech(1.0, 5.0, 0.0), 11.48, 1.0, 0.01);
    let r = coherence_transfer(&cfg, &IntegratorConfig::default()).unwrap();
    assert!((r.log10_p + 2.06).abs() < 0.4, "{}", r.log10_p);
    assert!(r.trace_drift <= 0.0);
}

#[test]
fn antisymmetric_two_pi_flips_and_four_pi_restores() {
    for (area, sign) in [(2.0 * PI, -1.0), (4.0 * PI, 1.0)] {
        let p = PulseSpec::constant(1.0);
        let tr = integrate(
            |t, y, dy| dy.copy_from_slice(&antisymmetric_rhs(&p, 0.0, t, y.try_into().unwrap())),
            0.0,
            area,
            &[1.0, 0.0],
            &tight(),
            None,
        )
        .unwrap();
        let a = tr.final_state();
        assert!((a[0] - sign).abs() < 1e-9 && a[1].abs() < 1e-9, "{a:?}");
    }
}

#[test]
fn coherence_swaps_as_dark_following_plus_two_pi() {
    // identical pulses of area 2π with √2 g/Ω ≫ 1: B₁ is carried through by the dark state, A₁ flips sign
    let amp = (2.0 * PI).sqrt();
    let p = PulseSpec::gaussian(amp, 1.0, 0.0);
    let g = 200.0;
    assert!(SQRT_2 * g / amp > 45.0);
    for model in [Model::Amplitudes, Model::SymAnti] {
        let cfg = TwoAtomConfig::counterintuitive(model, p, p, 0.0, g, 0.0);
        let r = coherence_transfer(&cfg, &tight()).unwrap();
        assert!(r.p < 1e-3, "{model:?}: p = {}", r.p);
    }
    let s = decompose(&[1.0, 0.0, 0.0, 0.0, 0.0]);
    assert!((s.b[0] - s.a[0]).abs() < 1e-15);
}
