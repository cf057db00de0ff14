//! Closed-form reference models: photon-style beam-splitter statistics, the
//! two-level flip between localized states, and the four-state Bell-basis
//! model of interacting pairs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Boson,
    Fermion,
}

impl Statistics {
    /// `+1` for bosons, `-1` for fermions.
    pub fn exchange_sign(self) -> f64 {
        match self {
            Statistics::Boson => 1.0,
            Statistics::Fermion => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
        }
    }
}

/// Output occupation probabilities for one particle entering each port.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputDistribution {
    pub both_in_a: f64,
    pub both_in_b: f64,
    pub one_each: f64,
}

/// Mode transformation `[a_out†, b_out†]ᵀ = M [a_in†, b_in†]ᵀ` of a 50-50
/// splitter, `M = (1/√2) [[1, -i], [-i, 1]]`.
pub fn beamsplitter_matrix() -> [[Complex64; 2]; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let one = Complex64::new(s, 0.0);
    let mi = Complex64::new(0.0, -s);
    [[one, mi], [mi, one]]
}

/// Expands `a_in† b_in† |0⟩` in output modes and reads off the occupation
/// probabilities under the given exchange statistics.
pub fn beamsplitter_statistics(statistics: Statistics) -> OutputDistribution {
    let m = beamsplitter_matrix();
    // Inverse of a unitary is its adjoint: a_in† = Σ_j W[0][j] c_j†.
    let w = [
        [m[0][0].conj(), m[1][0].conj()],
        [m[0][1].conj(), m[1][1].conj()],
    ];
    let sqrt2 = std::f64::consts::SQRT_2;
    match statistics {
        Statistics::Boson => {
            // (c_a†)²|0⟩ = √2 |2,0⟩; c_a† c_b† = c_b† c_a†.
            let aa = w[0][0] * w[1][0] * sqrt2;
            let bb = w[0][1] * w[1][1] * sqrt2;
            let ab = w[0][0] * w[1][1] + w[0][1] * w[1][0];
            OutputDistribution {
                both_in_a: aa.norm_sqr(),
                both_in_b: bb.norm_sqr(),
                one_each: ab.norm_sqr(),
            }
        }
        Statistics::Fermion => {
            // (c†)² = 0; c_b† c_a† = -c_a† c_b†.
            let ab = w[0][0] * w[1][1] - w[0][1] * w[1][0];
            OutputDistribution {
                both_in_a: 0.0,
                both_in_b: 0.0,
                one_each: ab.norm_sqr(),
            }
        }
    }
}

/// Amplitudes on `(φ_L, φ_R)` after time `t` starting in `φ_L`, dropping
/// the common phase: `(cos Ωt, i sin Ωt)`.
pub fn two_level_evolution(t: f64, omega: f64) -> (Complex64, Complex64) {
    let (s, c) = (omega * t).sin_cos();
    (Complex64::new(c, 0.0), Complex64::new(0.0, s))
}

/// Effective flip rate `½ sqrt(4Ω² + V̄²/ħ²)`.
pub fn omega_eff(omega: f64, v_bar: f64, hbar: f64) -> f64 {
    0.5 * (4.0 * omega * omega + (v_bar / hbar).powi(2)).sqrt()
}

/// Pair state `a1 u1 + a2 u2 + a3 u3 + a4 u4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellState4 {
    pub amplitudes: [Complex64; 4],
}

impl BellState4 {
    /// Basis state `u_{k+1}`.
    pub fn basis(k: usize) -> Self {
        let mut amplitudes = [Complex64::default(); 4];
        amplitudes[k] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn populations(&self) -> [f64; 4] {
        self.amplitudes.map(|a| a.norm_sqr())
    }
}

/// Four-state Hamiltonian: `u1 ↔ u2` coupled by `-2ħΩ`, `u2` and `u3`
/// shifted by `2V̄`, all on top of `2Ē`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bell4Hamiltonian {
    pub omega: f64,
    pub v_bar: f64,
    pub e_bar: f64,
    pub hbar: f64,
}

impl Bell4Hamiltonian {
    pub fn new(omega: f64, v_bar: f64, hbar: f64) -> Self {
        Self {
            omega,
            v_bar,
            e_bar: 0.0,
            hbar,
        }
    }

    pub fn matrix(&self) -> [[f64; 4]; 4] {
        let c = 2.0 * self.e_bar;
        let k = -2.0 * self.hbar * self.omega;
        let v = 2.0 * self.v_bar;
        [
            [c, k, 0.0, 0.0],
            [k, c + v, 0.0, 0.0],
            [0.0, 0.0, c + v, 0.0],
            [0.0, 0.0, 0.0, c],
        ]
    }

    /// Exact `exp(-iHt/ħ)` applied to `state`. With `shifted`, the constant
    /// `2Ē + V̄` is dropped, which changes only a global phase.
    pub fn evolve(&self, state: &BellState4, t: f64, shifted: bool) -> BellState4 {
        let offset = if shifted { 0.0 } else { 2.0 * self.e_bar + self.v_bar };
        let global = Complex64::cis(-offset * t / self.hbar);
        // Traceless 2x2 block B = [[-V̄, -2ħΩ], [-2ħΩ, V̄]], B² = λ² I.
        let coupling = -2.0 * self.hbar * self.omega;
        let lambda = (self.v_bar * self.v_bar + coupling * coupling).sqrt();
        let phase = lambda * t / self.hbar;
        let (sin, cos) = phase.sin_cos();
        // exp(-iBt/ħ) = cos I - i sin B/λ
        let (b11, b12, b22) = if lambda > 0.0 {
            (-self.v_bar / lambda, coupling / lambda, self.v_bar / lambda)
        } else {
            (0.0, 0.0, 0.0)
        };
        let i = Complex64::i();
        let u11 = cos - i * sin * b11;
        let u12 = -i * sin * b12;
        let u22 = cos - i * sin * b22;
        let [a1, a2, a3, a4] = state.amplitudes;
        BellState4 {
            amplitudes: [
                global * (u11 * a1 + u12 * a2),
                global * (u12 * a1 + u22 * a2),
                global * Complex64::cis(-self.v_bar * t / self.hbar) * a3,
                global * Complex64::cis(self.v_bar * t / self.hbar) * a4,
            ],
        }
    }
}

/// Convenience wrapper around [`Bell4Hamiltonian::evolve`] with `Ē = 0`.
pub fn bell4_evolve(initial: &BellState4, t: f64, omega: f64, v_bar: f64, hbar: f64) -> BellState4 {
    Bell4Hamiltonian::new(omega, v_bar, hbar).evolve(initial, t, false)
}

/// Square-pulse model of the coupler: start in `u1`, couple at constant `Ω`
/// for the time that gives full `u1 → u2` transfer without interaction
/// (`Ωt = π/4`), and return the final `u2` population.
pub fn analytic_universality_point(v_bar: f64, two_hbar_omega: f64, hbar: f64) -> f64 {
    let omega = two_hbar_omega / (2.0 * hbar);
    let t = std::f64::consts::FRAC_PI_4 / omega;
    bell4_evolve(&BellState4::basis(0), t, omega, v_bar, hbar).populations()[1]
}

/// Same model evaluated at a ratio `|V̄|/(2ħΩ)`; independent of `ħ` and of
/// the chosen `2ħΩ`.
pub fn analytic_same_channel_probability(ratio: f64) -> f64 {
    analytic_universality_point(ratio * 8.0, 8.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitter_statistics() {
        let b = beamsplitter_statistics(Statistics::Boson);
        assert!(b.one_each.abs() < 1e-15);
        assert!((b.both_in_a - 0.5).abs() < 1e-15 && (b.both_in_b - 0.5).abs() < 1e-15);
        let f = beamsplitter_statistics(Statistics::Fermion);
        assert!((f.one_each - 1.0).abs() < 1e-15);
        assert_eq!(f.both_in_a + f.both_in_b, 0.0);
    }

    #[test]
    fn splitter_matrix_is_unitary() {
        let m = beamsplitter_matrix();
        for i in 0..2 {
            for j in 0..2 {
                let v: Complex64 = (0..2).map(|k| m[k][i].conj() * m[k][j]).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((v - expected).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn two_level_flip() {
        let omega = 0.79;
        let (l, r) = two_level_evolution(0.0, omega);
        assert_eq!((l, r), (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
        let t = std::f64::consts::FRAC_PI_4 / omega;
        let (l, r) = two_level_evolution(t, omega);
        assert!((l.norm_sqr() - 0.5).abs() < 1e-15 && (r.norm_sqr() - 0.5).abs() < 1e-15);
        let (l, r) = two_level_evolution(2.0 * t, omega);
        assert!(l.norm() < 1e-15 && (r - Complex64::i()).norm() < 1e-15);
    }

    #[test]
    fn resonant_pulse_moves_u1_to_u2() {
        let omega = 0.8;
        let t = std::f64::consts::FRAC_PI_4 / omega;
        let s = bell4_evolve(&BellState4::basis(0), t, omega, 0.0, 6.0);
        assert!((s.populations()[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn u4_is_uncoupled() {
        for (t, v) in [(0.3, 0.0), (1.7, 12.0), (9.1, -40.0)] {
            let s = bell4_evolve(&BellState4::basis(3), t, 0.8, v, 6.0);
            assert!((s.populations()[3] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn detuned_maximum_transfer_at_sqrt3() {
        // Detuned two-level formula: max transfer 4Ω²/(4Ω² + V̄²/ħ²).
        let (omega, hbar) = (0.75, 6.0);
        let v_bar = 3f64.sqrt() * 2.0 * hbar * omega;
        let expected = 4.0 * omega * omega / (4.0 * omega * omega + (v_bar / hbar).powi(2));
        assert!((expected - 0.25).abs() < 1e-12);
        let period = std::f64::consts::PI / (2.0 * omega_eff(omega, v_bar, hbar));
        let best = (0..=2000)
            .map(|k| {
                let t = period * k as f64 / 2000.0;
                bell4_evolve(&BellState4::basis(0), t, omega, v_bar, hbar).populations()[1]
            })
            .fold(0.0, f64::max);
        assert!((best - expected).abs() < 1e-9, "{best}");
    }

    #[test]
    fn universality_point_endpoints() {
        assert!((analytic_universality_point(0.0, 8.0, 6.0) - 1.0).abs() < 1e-12);
        // At |V̄|/(2ħΩ) = √3 the effective rate doubles and the pulse ends at a node.
        assert!(analytic_same_channel_probability(3f64.sqrt()) < 1e-12);
        let a = analytic_universality_point(5.0, 8.0, 6.0);
        let b = analytic_universality_point(-5.0, 8.0, 6.0);
        assert!((a - b).abs() < 1e-14);
    }
}
