use num_complex::Complex64;
use proptest::prelude::*;

use groovesim::analytic::{bell4_evolve, omega_eff, Bell4Hamiltonian, BellState4};
use groovesim::grid::{gaussian_packet, Axes, Grid1D};
use groovesim::potential::{ChannelPotential, InteractionPotential};
use groovesim::propagator::{propagate_paraxial, ParaxialConfig, PropagationConfig, SplitOperator, SplittingOrder, StaticPotential};
use groovesim::scaling::{PhaseSpacePoint, ScaledUnits, RB87_MASS};
use groovesim::twoparticle::{build_initial, Statistics};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn splitting() -> impl Strategy<Value = SplittingOrder> {
    prop_oneof![Just(SplittingOrder::Lie), Just(SplittingOrder::Strang)]
}

fn bell_state() -> impl Strategy<Value = BellState4> {
    prop::array::uniform4((-1.0f64..1.0, -1.0f64..1.0)).prop_filter_map("nonzero", |a| {
        let amps = a.map(|(re, im)| Complex64::new(re, im));
        let n: f64 = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        (n > 1e-3).then(|| BellState4 {
            amplitudes: amps.map(|c| c / n),
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scaling_round_trip(
        xi in 1e-9f64..1e-5, tau in 1e-9f64..1e-2, m in 1e-31f64..1e-24,
        x in -1e-5f64..1e-5, z in -1e-3f64..1e-3, t in -1.0f64..1.0, p in -1e-25f64..1e-25,
    ) {
        let u = ScaledUnits::new(xi, tau, m).unwrap();
        let point = PhaseSpacePoint { x, z, t, p };
        let back = u.unscale(u.scale(point));
        for (a, b) in [(back.x, x), (back.z, z), (back.t, t), (back.p, p)] {
            prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(f64::MIN_POSITIVE));
        }
    }

    #[test]
    fn hbar_eff_depends_on_tau_over_xi_squared(xi in 1e-8f64..1e-6, tau in 1e-6f64..1e-3, c in 0.1f64..10.0) {
        let a = ScaledUnits::new(xi, tau, RB87_MASS).unwrap().hbar_eff();
        let b = ScaledUnits::new(c * xi, c * c * tau, RB87_MASS).unwrap().hbar_eff();
        prop_assert!(rel(b, a) < 1e-12);
    }

    #[test]
    fn groove_is_even_nonnegative_and_zero_at_the_valleys(
        omega in 1.0f64..60.0, d0 in 0.2f64..4.0, eta in 0.5f64..40.0,
        x in -6.0f64..6.0, z in -100.0f64..100.0,
    ) {
        let ch = ChannelPotential::new(omega, d0, eta).unwrap();
        let u = ch.groove(x, z);
        prop_assert!(u >= 0.0);
        prop_assert_eq!(u, ch.groove(-x, z));
        let d = ch.separation(z);
        prop_assert!(ch.groove(0.5 * d, z).abs() < 1e-9);
    }

    #[test]
    fn coulomb_decreases_and_decays(v0 in 0.1f64..100.0, eps in 0.05f64..2.0, r in 0.0f64..50.0, dr in 1e-3f64..5.0) {
        let v = InteractionPotential::coulomb(v0, eps).unwrap();
        prop_assert!(v.value(r + dr) < v.value(r));
        prop_assert!(v.value(r).abs() <= v0 / r.max(eps) + 1e-12);
    }

    #[test]
    fn lennard_jones_decays(v0 in -100.0f64..100.0, eps in 0.05f64..1.0, b in 0.05f64..1.0) {
        let v = InteractionPotential::lennard_jones(v0, eps, b).unwrap();
        prop_assert!(v.value(100.0 * eps.max(b)).abs() < 1e-6 * v0.abs().max(1e-300));
    }

    #[test]
    fn bell4_is_unitary(s in bell_state(), t in 0.0f64..50.0, omega in 0.05f64..3.0, v in -30.0f64..30.0) {
        let out = bell4_evolve(&s, t, omega, v, 6.0);
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_shift_is_a_global_phase(
        s in bell_state(), t in 0.0f64..50.0, omega in 0.05f64..3.0, v in -30.0f64..30.0, e in -100.0f64..100.0,
    ) {
        let h = Bell4Hamiltonian { omega, v_bar: v, e_bar: e, hbar: 6.0 };
        let full = h.evolve(&s, t, false);
        let shifted = h.evolve(&s, t, true);
        for (a, b) in full.populations().iter().zip(shifted.populations()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        // Same global phase on every component.
        let ratio = full.amplitudes[0] * shifted.amplitudes[0].conj() + full.amplitudes[1] * shifted.amplitudes[1].conj()
            + full.amplitudes[2] * shifted.amplitudes[2].conj() + full.amplitudes[3] * shifted.amplitudes[3].conj();
        prop_assert!((ratio.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn hamiltonian_keeps_its_block_structure(omega in 0.05f64..3.0, v in -30.0f64..30.0, e in -50.0f64..50.0) {
        let m = Bell4Hamiltonian { omega, v_bar: v, e_bar: e, hbar: 6.0 }.matrix();
        for i in 0..4 {
            for j in 0..4 {
                prop_assert_eq!(m[i][j], m[j][i]);
                if i != j && !(i < 2 && j < 2) {
                    prop_assert_eq!(m[i][j], 0.0);
                }
            }
        }
    }

    #[test]
    fn populations_repeat_at_the_effective_flip_period(
        s in bell_state(), t in 0.0f64..20.0, omega in 0.05f64..3.0, v in -30.0f64..30.0,
    ) {
        let hbar = 6.0;
        let period = 2.0 * std::f64::consts::PI / (2.0 * omega_eff(omega, v, hbar));
        let a = bell4_evolve(&s, t, omega, v, hbar).populations();
        for shift in [0.5 * period, period] {
            let b = bell4_evolve(&s, t + shift, omega, v, hbar).populations();
            for (x, y) in a.iter().zip(b) {
                prop_assert!((x - y).abs() < 1e-10, "shift {shift}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn u4_population_is_conserved(s in bell_state(), t in 0.0f64..50.0, omega in 0.05f64..3.0, v in -30.0f64..30.0) {
        let out = bell4_evolve(&s, t, omega, v, 6.0);
        // A unit phase factor; only rounding can change the modulus.
        prop_assert!((out.populations()[3] - s.populations()[3]).abs() <= 4.0 * f64::EPSILON);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn split_operator_preserves_norm(
        center in -2.0f64..2.0, kick in -20.0f64..20.0, order in splitting(),
    ) {
        let g = Grid1D::new(128, -8.0, 8.0).unwrap();
        let psi0 = gaussian_packet(g, center, 30.0, 6.0, Some(kick)).unwrap();
        let cfg = PropagationConfig { dt: 1e-3, t_start: 0.0, t_end: 20.0, splitting: order, hbar: 6.0, snapshot_stride: 20_000, frame_stride: 0 };
        let pot = StaticPotential::from_fn_1d(&g, |x| 450.0 * x * x);
        let mut op = SplitOperator::new(&Axes::Line(g), pot, &cfg).unwrap();
        let mut psi = psi0.clone();
        op.evolve(&mut psi, 0.0, cfg.n_steps(), cfg.snapshot_stride, |_, _, _| Ok(())).unwrap();
        prop_assert_eq!(cfg.n_steps(), 20_000);
        prop_assert!((psi.norm() - 1.0).abs() < 1e-10, "drift {}", psi.norm() - 1.0);
    }

    #[test]
    fn static_evolution_is_time_reversible(center in -2.0f64..2.0, kick in -20.0f64..20.0) {
        // The palindromic Strang step is its own adjoint, so flipping the
        // sign of dt undoes it.
        let g = Grid1D::new(128, -8.0, 8.0).unwrap();
        let psi0 = gaussian_packet(g, center, 30.0, 6.0, Some(kick)).unwrap();
        let cfg = PropagationConfig { dt: 1e-3, t_start: 0.0, t_end: 2.0, splitting: SplittingOrder::Strang, hbar: 6.0, snapshot_stride: 2000, frame_stride: 0 };
        let ch = ChannelPotential::new(30.0, 1.8903, 30.0).unwrap();
        let mut op = SplitOperator::new(&Axes::Line(g), StaticPotential::frozen_double_well(&ch, &g), &cfg).unwrap();
        let mut psi = psi0.clone();
        op.evolve(&mut psi, 0.0, 2000, 2000, |_, _, _| Ok(())).unwrap();
        op.reverse();
        op.evolve(&mut psi, 2.0, 2000, 2000, |_, _, _| Ok(())).unwrap();
        let fidelity = psi.overlap(&psi0).norm_sqr();
        prop_assert!(fidelity > 1.0 - 1e-8, "fidelity {fidelity}");
    }

    #[test]
    fn pair_runs_keep_exchange_parity(v0 in -80.0f64..80.0, fermion in any::<bool>()) {
        let statistics = if fermion { Statistics::Fermion } else { Statistics::Boson };
        let ch = ChannelPotential::new(30.0, 1.8903, 30.0).unwrap();
        let g = Grid1D::new(64, -8.0, 8.0).unwrap();
        let state = build_initial(statistics, &ch, g, 6.0).unwrap();
        let v = InteractionPotential::coulomb(v0, 1.0).unwrap();
        let cfg = PropagationConfig { dt: 1e-3, t_start: -0.5, t_end: 0.0, splitting: SplittingOrder::Strang, hbar: 6.0, snapshot_stride: 50, frame_stride: 0 };
        let par = ParaxialConfig { decoupling_tolerance: 10.0, ..ParaxialConfig::default() };
        let run = propagate_paraxial(&state.field, &ch, Some(&v), &par, &cfg).unwrap();
        prop_assert!(run.max_exchange_defect.unwrap() < 1e-8);
        for s in &run.samples {
            prop_assert!((s.first + s.second - 1.0).abs() < 1e-6);
        }
    }
}
