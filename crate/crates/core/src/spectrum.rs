//! Stationary states of the double well frozen at its narrowest point.
//!
//! The lowest doublet `ψ_S`, `ψ_A` comes from a second-order finite-difference
//! Hamiltonian solved by Sturm-sequence bisection plus inverse iteration.
//! Localized states and the two-particle Bell basis are built from it.

use num_complex::Complex64;

use crate::error::{check_positive, Error, Result};
use crate::grid::{Axes, Grid1D, WaveField};
use crate::potential::{ChannelPotential, InteractionPotential};
use crate::spectral::SpectralPlan;

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct SymmetricTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymmetricTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal must be one shorter");
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// Number of eigenvalues strictly below `x` (Sturm count).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.len() {
            if i > 0 {
                let prev = if q == 0.0 { f64::EPSILON * self.scale() } else { q };
                q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / prev;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn scale(&self) -> f64 {
        self.diag
            .iter()
            .chain(&self.off)
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(1.0)
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Unit eigenvector for an (accurate) eigenvalue by inverse iteration,
    /// kept orthogonal to the unit vectors in `deflate`.
    pub fn eigenvector(&self, lambda: f64, deflate: &[&[f64]]) -> Vec<f64> {
        let n = self.len();
        let shift = lambda + 1e-12 * self.scale();
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7 % 13) as f64)).collect();
        for _ in 0..4 {
            v = self.solve_shifted(shift, &v);
            for d in deflate {
                let c = dot(&v, d);
                v.iter_mut().zip(d.iter()).for_each(|(x, y)| *x -= c * y);
            }
            let norm = dot(&v, &v).sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
        }
        v
    }

    pub fn rayleigh(&self, v: &[f64]) -> f64 {
        dot(v, &self.apply(v)) / dot(v, v)
    }

    /// Solves `(T - shift·I) x = b` with the Thomas algorithm.
    fn solve_shifted(&self, shift: f64, b: &[f64]) -> Vec<f64> {
        let n = self.len();
        let tiny = f64::EPSILON * self.scale();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut pivot = self.diag[0] - shift;
        if pivot.abs() < tiny {
            pivot = tiny;
        }
        if n > 1 {
            c[0] = self.off[0] / pivot;
        }
        d[0] = b[0] / pivot;
        for i in 1..n {
            let mut p = self.diag[i] - shift - self.off[i - 1] * c[i - 1];
            if p.abs() < tiny {
                p = tiny;
            }
            if i + 1 < n {
                c[i] = self.off[i] / p;
            }
            d[i] = (b[i] - self.off[i - 1] * d[i - 1]) / p;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        d
    }
}

/// `-ħ²/2 ∂² + U` with the three-point Laplacian.
pub fn finite_difference_hamiltonian(grid: &Grid1D, potential: &[f64], hbar: f64) -> SymmetricTridiagonal {
    let h2 = hbar * hbar / (grid.dx() * grid.dx());
    let diag = potential.iter().map(|u| h2 + u).collect();
    let off = vec![-0.5 * h2; grid.len() - 1];
    SymmetricTridiagonal::new(diag, off)
}

#[derive(Debug, Clone)]
pub struct DoubleWellSpectrum {
    grid: Grid1D,
    channel: ChannelPotential,
    hbar: f64,
    psi_s: Vec<f64>,
    psi_a: Vec<f64>,
    e_s: f64,
    e_a: f64,
    levels: Vec<f64>,
}

impl DoubleWellSpectrum {
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn channel(&self) -> &ChannelPotential {
        &self.channel
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn psi_s(&self) -> &[f64] {
        &self.psi_s
    }

    pub fn psi_a(&self) -> &[f64] {
        &self.psi_a
    }

    pub fn e_s(&self) -> f64 {
        self.e_s
    }

    pub fn e_a(&self) -> f64 {
        self.e_a
    }

    /// Lowest eigenvalues, ascending.
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn e_bar(&self) -> f64 {
        0.5 * (self.e_a + self.e_s)
    }

    /// `Ω = (E_A - E_S)/(2ħ)`.
    pub fn omega_split(&self) -> f64 {
        (self.e_a - self.e_s) / (2.0 * self.hbar)
    }

    /// `2ħΩ = E_A - E_S`.
    pub fn two_hbar_omega(&self) -> f64 {
        self.e_a - self.e_s
    }

    pub fn frozen_potential(&self) -> Vec<f64> {
        self.grid
            .points()
            .into_iter()
            .map(|x| self.channel.groove(x, 0.0))
            .collect()
    }

    pub fn hamiltonian(&self) -> SymmetricTridiagonal {
        finite_difference_hamiltonian(&self.grid, &self.frozen_potential(), self.hbar)
    }

    pub fn psi_s_field(&self) -> WaveField {
        real_field(self.grid, &self.psi_s)
    }

    pub fn psi_a_field(&self) -> WaveField {
        real_field(self.grid, &self.psi_a)
    }
}

fn real_field(grid: Grid1D, v: &[f64]) -> WaveField {
    WaveField::new(
        Axes::Line(grid),
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
    )
    .expect("length matches grid")
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn mirror_dot(grid: &Grid1D, a: &[f64], b: &[f64]) -> f64 {
    (0..a.len()).map(|i| a[i] * b[grid.mirror_index(i)]).sum()
}

/// Rotates the doublet `{v0, v1}` onto eigenvectors of the mirror operator,
/// which also resolves numerically degenerate pairs. Fails unless one even
/// and one odd state come out.
fn parity_adapted(grid: &Grid1D, v0: &[f64], v1: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let (p00, p11) = (mirror_dot(grid, v0, v0), mirror_dot(grid, v1, v1));
    let p01 = 0.5 * (mirror_dot(grid, v0, v1) + mirror_dot(grid, v1, v0));
    // Eigen-decomposition of the symmetric 2x2 [[p00, p01], [p01, p11]].
    let mean = 0.5 * (p00 + p11);
    let radius = (0.25 * (p00 - p11).powi(2) + p01 * p01).sqrt();
    let (hi, lo) = (mean + radius, mean - radius);
    let classify = |p: f64| -> i8 {
        if p > 0.5 {
            1
        } else if p < -0.5 {
            -1
        } else {
            0
        }
    };
    if classify(hi) != 1 || classify(lo) != -1 {
        return Err(Error::ParityMismatch([classify(p00), classify(p11)]));
    }
    let theta = 0.5 * (2.0 * p01).atan2(p00 - p11);
    let (c, s) = (theta.cos(), theta.sin());
    let even = v0.iter().zip(v1).map(|(a, b)| c * a + s * b).collect();
    let odd = v0.iter().zip(v1).map(|(a, b)| -s * a + c * b).collect();
    Ok((even, odd))
}

/// Lowest `n_states` levels of `U(x, 0)` and the even/odd ground doublet.
pub fn solve_double_well(
    channel: &ChannelPotential,
    grid: &Grid1D,
    hbar: f64,
    n_states: usize,
) -> Result<DoubleWellSpectrum> {
    check_positive("hbar", hbar)?;
    if n_states < 2 {
        return Err(Error::InvalidParameter {
            field: "n_states",
            reason: "need at least the lowest two states".into(),
        });
    }
    if !grid.is_symmetric() {
        return Err(Error::InvalidParameter {
            field: "grid",
            reason: "parity classification needs a grid symmetric about 0".into(),
        });
    }
    let potential: Vec<f64> = grid.points().into_iter().map(|x| channel.groove(x, 0.0)).collect();
    let h = finite_difference_hamiltonian(grid, &potential, hbar);
    let levels: Vec<f64> = (0..n_states).map(|k| h.eigenvalue(k)).collect();
    let v0 = h.eigenvector(levels[0], &[]);
    let v1 = h.eigenvector(levels[1], &[&v0]);
    let (even, odd) = parity_adapted(grid, &v0, &v1)?;
    let (e_even, e_odd) = (h.rayleigh(&even), h.rayleigh(&odd));
    let (mut s, mut a, e_s, e_a) = (even, odd, e_even, e_odd);

    // Orthogonalize against rounding, then normalize to Σψ²Δx = 1.
    let sa = dot(&s, &a) / dot(&s, &s);
    a.iter_mut().zip(&s).for_each(|(y, x)| *y -= sa * x);
    let scale = |v: &mut Vec<f64>| {
        let n = (dot(v, v) * grid.dx()).sqrt();
        v.iter_mut().for_each(|x| *x /= n);
    };
    scale(&mut s);
    scale(&mut a);

    let center = grid.len() / 2;
    if s[center] < 0.0 {
        s.iter_mut().for_each(|x| *x = -*x);
    }
    let right: f64 = (0..grid.len())
        .filter(|&i| grid.x(i) > 0.0)
        .map(|i| a[i])
        .sum();
    if right < 0.0 {
        a.iter_mut().for_each(|x| *x = -*x);
    }

    Ok(DoubleWellSpectrum {
        grid: *grid,
        channel: *channel,
        hbar,
        psi_s: s,
        psi_a: a,
        e_s,
        e_a,
        levels,
    })
}

/// Left- and right-localized combinations of the doublet. With `ψ_A`
/// positive on the right, `φ_L = (ψ_S - ψ_A)/√2` and `φ_R = (ψ_S + ψ_A)/√2`.
pub fn localized_states(spec: &DoubleWellSpectrum) -> (WaveField, WaveField) {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let left: Vec<f64> = spec.psi_s.iter().zip(&spec.psi_a).map(|(s, a)| r * (s - a)).collect();
    let right: Vec<f64> = spec.psi_s.iter().zip(&spec.psi_a).map(|(s, a)| r * (s + a)).collect();
    (real_field(spec.grid, &left), real_field(spec.grid, &right))
}

/// Ground state of a static 1D potential by imaginary-time split-operator
/// relaxation. Returns the normalized state and its energy estimate.
pub fn imaginary_time_ground_state(
    grid: &Grid1D,
    potential: &[f64],
    hbar: f64,
    dtau: f64,
    steps: usize,
    initial: &WaveField,
) -> Result<(WaveField, f64)> {
    check_positive("dtau", dtau)?;
    let n = grid.len();
    let mut plan = SpectralPlan::new(1, n);
    let kinetic: Vec<f64> = grid
        .wavenumbers()
        .iter()
        .map(|k| (-0.5 * hbar * hbar * k * k * 0.5 * dtau / hbar).exp() / n as f64)
        .collect();
    let pot: Vec<f64> = potential.iter().map(|u| (-u * dtau / hbar).exp()).collect();
    let mut field = initial.clone();
    field.normalize();
    let mut energy = f64::NAN;
    for _ in 0..steps {
        let psi = field.amplitudes_mut();
        plan.forward(psi);
        psi.iter_mut().zip(&kinetic).for_each(|(p, k)| *p *= k);
        plan.inverse(psi);
        psi.iter_mut().zip(&pot).for_each(|(p, k)| *p *= k);
        plan.forward(psi);
        psi.iter_mut().zip(&kinetic).for_each(|(p, k)| *p *= k);
        plan.inverse(psi);
        let shrink = field.normalize();
        energy = -hbar * shrink.ln() / (2.0 * dtau);
    }
    Ok((field, energy))
}

/// The four symmetrized two-particle products of `φ_L`, `φ_R`:
/// `u1 = (LR+RL)/√2`, `u2 = (LL+RR)/√2`, `u3 = (LL-RR)/√2`, `u4 = (LR-RL)/√2`.
#[derive(Debug, Clone)]
pub struct BellBasis {
    grid: Grid1D,
    phi_l: Vec<f64>,
    phi_r: Vec<f64>,
    u: [Vec<f64>; 4],
}

impl BellBasis {
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn phi_l(&self) -> &[f64] {
        &self.phi_l
    }

    pub fn phi_r(&self) -> &[f64] {
        &self.phi_r
    }

    /// `u_{k+1}` as a row-major `n x n` array.
    pub fn u(&self, k: usize) -> &[f64] {
        &self.u[k]
    }

    pub fn field(&self, k: usize) -> WaveField {
        WaveField::new(
            Axes::Plane(self.grid, self.grid),
            self.u[k].iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
        .expect("length matches grid")
    }

    /// `(u_a, u_b)` on the grid.
    pub fn inner(&self, a: usize, b: usize) -> f64 {
        dot(&self.u[a], &self.u[b]) * self.grid.dx() * self.grid.dx()
    }

    /// `(u_k, V u_k)` for a pair interaction `V(|x1 - x2|)`.
    pub fn diagonal_element(&self, k: usize, v: &InteractionPotential) -> f64 {
        let xs = self.grid.points();
        let n = xs.len();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let u = self.u[k][i * n + j];
                acc += u * u * v.value((xs[i] - xs[j]).abs());
            }
        }
        acc * self.grid.dx() * self.grid.dx()
    }
}

pub fn bell_basis(phi_l: &WaveField, phi_r: &WaveField) -> Result<BellBasis> {
    let grid = phi_l.line_grid()?;
    if phi_r.line_grid()? != grid {
        return Err(Error::InvalidParameter {
            field: "phi_r",
            reason: "localized states must share a grid".into(),
        });
    }
    let l: Vec<f64> = phi_l.amplitudes().iter().map(|c| c.re).collect();
    let r: Vec<f64> = phi_r.amplitudes().iter().map(|c| c.re).collect();
    let n = grid.len();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let build = |f: &dyn Fn(usize, usize) -> f64| -> Vec<f64> {
        let mut v: Vec<f64> = (0..n * n).map(|idx| f(idx / n, idx % n)).collect();
        let norm = (dot(&v, &v) * grid.dx() * grid.dx()).sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        v
    };
    let u = [
        build(&|i, j| s * (l[i] * r[j] + r[i] * l[j])),
        build(&|i, j| s * (l[i] * l[j] + r[i] * r[j])),
        build(&|i, j| s * (l[i] * l[j] - r[i] * r[j])),
        build(&|i, j| s * (l[i] * r[j] - r[i] * l[j])),
    ];
    Ok(BellBasis {
        grid,
        phi_l: l,
        phi_r: r,
        u,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanInteraction {
    /// `¼[(u2,Vu2) + (u3,Vu3) - (u1,Vu1) - (u4,Vu4)]`.
    pub exact: f64,
    /// Same quantity with `φ_L`, `φ_R` replaced by ground-state Gaussians a
    /// distance `d0` apart.
    pub gaussian: f64,
    /// `(u_k, V u_k)` for k = 1..4.
    pub diagonal: [f64; 4],
}

/// Mean interaction shift `V̄` of the doubly occupied Bell states.
pub fn mean_interaction(
    basis: &BellBasis,
    v: &InteractionPotential,
    channel: &ChannelPotential,
    hbar: f64,
) -> MeanInteraction {
    let diagonal = [0, 1, 2, 3].map(|k| basis.diagonal_element(k, v));
    let exact = 0.25 * (diagonal[1] + diagonal[2] - diagonal[0] - diagonal[3]);

    let grid = basis.grid;
    let xs = grid.points();
    let width = channel.omega() / (2.0 * hbar);
    let gauss = |c: f64| -> Vec<f64> {
        let mut g: Vec<f64> = xs.iter().map(|x| (-width * (x - c).powi(2)).exp()).collect();
        let norm = dot(&g, &g) * grid.dx();
        g.iter_mut().for_each(|x| *x = *x * *x / norm);
        g
    };
    let here = gauss(0.0);
    let there = gauss(channel.d0());
    let n = xs.len();
    let (mut same, mut cross) = (0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let w = v.value((xs[i] - xs[j]).abs());
            same += here[i] * here[j] * w;
            cross += here[i] * there[j] * w;
        }
    }
    let dx2 = grid.dx() * grid.dx();
    MeanInteraction {
        exact,
        gaussian: 0.5 * (same - cross) * dx2,
        diagonal,
    }
}
