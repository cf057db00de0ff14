use groovesim::grid::{probability_left_right, Axes, Grid1D, WaveField};
use groovesim::potential::{ChannelPotential, InteractionPotential};
use groovesim::propagator::{PropagationConfig, SplitOperator, SplittingOrder, StaticPotential};
use groovesim::spectrum::{bell_basis, imaginary_time_ground_state, localized_states, mean_interaction, solve_double_well};
use groovesim::grid::gaussian_packet;

const HBAR: f64 = 6.0;

fn channel() -> ChannelPotential {
    ChannelPotential::new(30.0, 1.8903, 30.0).unwrap()
}

fn grid() -> Grid1D {
    Grid1D::new(256, -8.0, 8.0).unwrap()
}

fn dot(a: &[f64], b: &[f64], dx: f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * dx
}

#[test]
fn doublet_is_orthonormal_with_definite_parity() {
    let g = grid();
    let s = solve_double_well(&channel(), &g, HBAR, 2).unwrap();
    let dx = g.dx();
    assert!((dot(s.psi_s(), s.psi_s(), dx) - 1.0).abs() < 1e-10);
    assert!((dot(s.psi_a(), s.psi_a(), dx) - 1.0).abs() < 1e-10);
    assert!(dot(s.psi_s(), s.psi_a(), dx).abs() < 1e-10);
    for i in 1..g.len() {
        let m = g.mirror_index(i);
        assert!((s.psi_s()[i] - s.psi_s()[m]).abs() < 1e-8);
        assert!((s.psi_a()[i] + s.psi_a()[m]).abs() < 1e-8);
    }
}

#[test]
fn eigen_residuals_are_small() {
    let s = solve_double_well(&channel(), &grid(), HBAR, 2).unwrap();
    let h = s.hamiltonian();
    for (psi, e) in [(s.psi_s(), s.e_s()), (s.psi_a(), s.e_a())] {
        let hpsi = h.apply(psi);
        let res: f64 = hpsi.iter().zip(psi).map(|(a, b)| (a - e * b).powi(2)).sum::<f64>().sqrt();
        let norm: f64 = psi.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(res < 1e-8 * norm, "residual {res}");
    }
}

#[test]
fn decoupled_wells_reach_oscillator_energy() {
    let ch = ChannelPotential::new(30.0, 20.0, 30.0).unwrap();
    let g = Grid1D::new(1024, -20.0, 20.0).unwrap();
    let s = solve_double_well(&ch, &g, HBAR, 2).unwrap();
    assert!((s.e_s() - 90.0).abs() < 0.9);
    assert!((s.e_a() - 90.0).abs() < 0.9);
    assert!(s.two_hbar_omega() < 1e-6);
}

#[test]
fn imaginary_time_relaxation_finds_the_symmetric_state() {
    let g = grid();
    let s = solve_double_well(&channel(), &g, HBAR, 2).unwrap();
    let start = gaussian_packet(g, 0.0, 2.0, HBAR, None).unwrap();
    let (ground, energy) =
        imaginary_time_ground_state(&g, &s.frozen_potential(), HBAR, 1e-3, 20_000, &start).unwrap();
    let fidelity = ground.overlap(&s.psi_s_field()).norm();
    assert!(fidelity > 1.0 - 1e-6, "fidelity {fidelity}");
    // Spectral and finite-difference kinetic terms differ at O(dx²).
    assert!((energy - s.e_s()).abs() / s.e_s() < 1e-3, "{energy} vs {}", s.e_s());
}

#[test]
fn splitting_shrinks_as_wells_separate() {
    let g = grid();
    let mut last = f64::INFINITY;
    for k in 0..=8 {
        let d0 = 1.0 + 0.25 * k as f64;
        let ch = channel().with_d0(d0).unwrap();
        let omega = solve_double_well(&ch, &g, HBAR, 2).unwrap().omega_split();
        assert!(omega < last, "d0 = {d0}: {omega} >= {last}");
        last = omega;
    }
}

#[test]
fn localized_states_mirror_each_other() {
    let s = solve_double_well(&channel(), &grid(), HBAR, 2).unwrap();
    let (l, r) = localized_states(&s);
    assert!(l.overlap(&r).norm() < 1e-10);
    assert!(l.mirrored().unwrap().max_difference(&r) < 1e-8);
    let lr = probability_left_right(&l).unwrap();
    // The wells overlap at d0 = 1.89, so about 1% sits across the barrier.
    assert!(lr.left > 0.98, "{lr:?}");
    // (φ_L + φ_R)/√2 = ψ_S splits evenly.
    let sym = probability_left_right(&s.psi_s_field()).unwrap();
    assert!((sym.left - 0.5).abs() < 1e-3 && (sym.right - 0.5).abs() < 1e-3);
}

#[test]
fn quarter_period_in_the_frozen_well_splits_evenly() {
    // Finer than the default so the finite-difference Ω matches the
    // spectral propagator to well below the tolerance.
    let g = Grid1D::new(512, -8.0, 8.0).unwrap();
    let ch = channel();
    let s = solve_double_well(&ch, &g, HBAR, 2).unwrap();
    let (l, _) = localized_states(&s);
    let t = std::f64::consts::FRAC_PI_4 / s.omega_split();
    let dt = t / 2000.0;
    let cfg = PropagationConfig {
        dt,
        t_start: 0.0,
        t_end: t,
        splitting: SplittingOrder::Strang,
        hbar: HBAR,
        snapshot_stride: 2000,
        frame_stride: 0,
    };
    let mut op = SplitOperator::new(&Axes::Line(g), StaticPotential::frozen_double_well(&ch, &g), &cfg).unwrap();
    let mut psi = l.clone();
    op.evolve(&mut psi, 0.0, 2000, 2000, |_, _, _| Ok(())).unwrap();
    let lr = probability_left_right(&psi).unwrap();
    assert!((lr.left - 0.5).abs() < 1e-3 && (lr.right - 0.5).abs() < 1e-3, "{lr:?}");
}

#[test]
fn bell_basis_is_orthonormal_with_exchange_parity() {
    let s = solve_double_well(&channel(), &grid(), HBAR, 2).unwrap();
    let (l, r) = localized_states(&s);
    let b = bell_basis(&l, &r).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            let expected = if i == j { 1.0 } else { 0.0 };
            assert!((b.inner(i, j) - expected).abs() < 1e-10, "({i}, {j})");
        }
    }
    for k in 0..3 {
        assert!(b.field(k).exchange_defect(1.0).unwrap() < 1e-10);
    }
    assert!(b.field(3).exchange_defect(-1.0).unwrap() < 1e-10);
}

#[test]
fn both_together_state_in_eigenstates() {
    let s = solve_double_well(&channel(), &grid(), HBAR, 2).unwrap();
    let (l, r) = localized_states(&s);
    let b = bell_basis(&l, &r).unwrap();
    let ss = WaveField::outer(&s.psi_s_field(), &s.psi_s_field()).unwrap();
    let aa = WaveField::outer(&s.psi_a_field(), &s.psi_a_field()).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let expected: Vec<_> = ss.amplitudes().iter().zip(aa.amplitudes()).map(|(x, y)| (x + y) * h).collect();
    let expected = WaveField::new(*ss.axes(), expected).unwrap();
    assert!(b.field(1).max_difference(&expected) < 1e-10);
}

#[test]
fn bell_projectors_are_complete_on_the_local_span() {
    let s = solve_double_well(&channel(), &grid(), HBAR, 2).unwrap();
    let (l, r) = localized_states(&s);
    let b = bell_basis(&l, &r).unwrap();
    // An arbitrary combination of the four products φ_a φ_b.
    let coeffs = [(0.3, 0.1), (-0.7, 0.2), (0.05, -0.4), (0.25, 0.0)];
    let products = [(&l, &l), (&l, &r), (&r, &l), (&r, &r)];
    let mut data = vec![num_complex::Complex64::default(); l.amplitudes().len().pow(2)];
    for ((re, im), (a, c)) in coeffs.iter().zip(products) {
        let p = WaveField::outer(a, c).unwrap();
        for (d, v) in data.iter_mut().zip(p.amplitudes()) {
            *d += num_complex::Complex64::new(*re, *im) * v;
        }
    }
    let state = WaveField::new(*b.field(0).axes(), data).unwrap();
    let mut rebuilt = vec![num_complex::Complex64::default(); state.amplitudes().len()];
    for k in 0..4 {
        let u = b.field(k);
        let c = u.overlap(&state);
        for (d, v) in rebuilt.iter_mut().zip(u.amplitudes()) {
            *d += c * v;
        }
    }
    let rebuilt = WaveField::new(*state.axes(), rebuilt).unwrap();
    assert!(rebuilt.max_difference(&state) < 1e-10);
}

#[test]
fn mean_interaction_is_linear_in_strength() {
    let ch = channel();
    let s = solve_double_well(&ch, &grid(), HBAR, 2).unwrap();
    let (l, r) = localized_states(&s);
    let b = bell_basis(&l, &r).unwrap();
    for v in [
        InteractionPotential::coulomb(50.0, 1.0).unwrap(),
        InteractionPotential::lennard_jones(7.0, 0.2, 0.25).unwrap(),
    ] {
        let one = mean_interaction(&b, &v, &ch, HBAR);
        let two = mean_interaction(&b, &v.with_v0(2.0 * v.v0()), &ch, HBAR);
        assert!((two.exact - 2.0 * one.exact).abs() < 1e-10 * one.exact.abs().max(1.0));
        let neg = mean_interaction(&b, &v.with_v0(-v.v0()), &ch, HBAR);
        assert!((neg.exact + one.exact).abs() < 1e-10 * one.exact.abs().max(1.0));
    }
}
