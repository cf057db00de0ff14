//! Split-operator time evolution.
//!
//! Each step factors `exp[-i(T+U)Δt/ħ]` into a kinetic part, applied in
//! Fourier space, and a potential part, applied pointwise. Both factors are
//! pure phases, so every step is unitary up to rounding.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_positive, Error, Result};
use crate::grid::{self, Axes, Grid1D, LeftRight, WaveField};
use crate::potential::{ChannelPotential, InteractionPotential};
use crate::spectral::SpectralPlan;

/// Runs abort once this much probability sits in the edge cells.
pub const BOUNDARY_ABORT_MASS: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplittingOrder {
    /// `e^{-iTΔt} e^{-iUΔt}`, first order.
    Lie,
    /// `e^{-iTΔt/2} e^{-iUΔt} e^{-iTΔt/2}`, second order.
    Strang,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagationConfig {
    pub dt: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub splitting: SplittingOrder,
    pub hbar: f64,
    /// Steps between recorded samples.
    pub snapshot_stride: usize,
    /// Steps between kept `|ψ|²` frames; 0 keeps none. Frames are taken at
    /// samples, so this should be a multiple of `snapshot_stride`.
    pub frame_stride: usize,
}

impl Default for PropagationConfig {
    fn default() -> Self {
        Self {
            dt: 0.001,
            t_start: -10.0,
            t_end: 10.0,
            splitting: SplittingOrder::Strang,
            hbar: 6.0,
            snapshot_stride: 100,
            frame_stride: 0,
        }
    }
}

impl PropagationConfig {
    pub fn validate(&self) -> Result<()> {
        check_positive("dt", self.dt)?;
        check_positive("hbar", self.hbar)?;
        if !(self.t_start.is_finite() && self.t_end.is_finite() && self.t_end > self.t_start) {
            return Err(Error::InvalidParameter {
                field: "t_end",
                reason: format!("need t_end > t_start, got [{}, {}]", self.t_start, self.t_end),
            });
        }
        if self.snapshot_stride == 0 {
            return Err(Error::InvalidParameter {
                field: "snapshot_stride",
                reason: "must be at least 1".into(),
            });
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        ((self.t_end - self.t_start) / self.dt).round() as usize
    }
}

/// Co-moving frame parameters: the longitudinal coordinate is replaced by
/// `z = p0·t` (scaled mass 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParaxialConfig {
    pub p0: f64,
    /// Allowed offset of `d(p0·t_start)` from its asymptote.
    pub decoupling_tolerance: f64,
}

impl Default for ParaxialConfig {
    fn default() -> Self {
        Self {
            p0: 30.0,
            decoupling_tolerance: 1e-3,
        }
    }
}

impl ParaxialConfig {
    pub fn new(p0: f64) -> Result<Self> {
        check_positive("p0", p0)?;
        Ok(Self {
            p0,
            ..Self::default()
        })
    }

    pub fn z_at(&self, t: f64) -> f64 {
        self.p0 * t
    }

    fn check_decoupled(&self, channel: &ChannelPotential, t: f64) -> Result<()> {
        let offset = channel.asymptotic_separation() - channel.separation(self.z_at(t));
        if offset > self.decoupling_tolerance {
            return Err(Error::NotDecoupled { t, offset });
        }
        Ok(())
    }
}

/// A potential energy surface sampled on a grid, possibly time dependent.
pub trait PotentialField: Send + Sync {
    fn time_dependent(&self) -> bool;

    /// Potential at every grid point (row-major) at time `t`.
    fn values(&self, t: f64, out: &mut [f64]);

    /// `ψ ← exp(-i·factor·U(t)) ψ`.
    fn apply_phase(&self, t: f64, factor: f64, psi: &mut [Complex64]) {
        let mut u = vec![0.0; psi.len()];
        self.values(t, &mut u);
        for (p, v) in psi.iter_mut().zip(&u) {
            *p *= Complex64::cis(-factor * v);
        }
    }
}

/// Fixed potential values.
#[derive(Debug, Clone)]
pub struct StaticPotential {
    values: Vec<f64>,
}

impl StaticPotential {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn from_fn_1d(grid: &Grid1D, f: impl Fn(f64) -> f64) -> Self {
        Self::new(grid.points().into_iter().map(f).collect())
    }

    pub fn zero(len: usize) -> Self {
        Self::new(vec![0.0; len])
    }

    /// Double well frozen at its narrowest point.
    pub fn frozen_double_well(channel: &ChannelPotential, grid: &Grid1D) -> Self {
        Self::from_fn_1d(grid, |x| channel.groove(x, 0.0))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

impl PotentialField for StaticPotential {
    fn time_dependent(&self) -> bool {
        false
    }

    fn values(&self, _t: f64, out: &mut [f64]) {
        out.copy_from_slice(&self.values);
    }
}

/// Transverse double well swept past a single particle: `U(x, p0·t)`.
#[derive(Debug, Clone)]
pub struct SweptChannel {
    channel: ChannelPotential,
    xs: Vec<f64>,
    p0: f64,
}

impl SweptChannel {
    pub fn new(channel: ChannelPotential, grid: &Grid1D, par: &ParaxialConfig) -> Self {
        Self {
            channel,
            xs: grid.points(),
            p0: par.p0,
        }
    }
}

impl PotentialField for SweptChannel {
    fn time_dependent(&self) -> bool {
        true
    }

    fn values(&self, t: f64, out: &mut [f64]) {
        let d = self.channel.separation(self.p0 * t);
        for (o, &x) in out.iter_mut().zip(&self.xs) {
            *o = self.channel.double_well(x, d);
        }
    }
}

/// Two particles in the swept double well, `U(x1,t) + U(x2,t) + V(|x1-x2|)`.
#[derive(Debug)]
pub struct SweptChannelPair {
    channel: ChannelPotential,
    xs: Vec<f64>,
    p0: f64,
    interaction: Option<Vec<f64>>,
    interaction_phase: OnceLock<(f64, Vec<Complex64>)>,
}

impl SweptChannelPair {
    pub fn new(
        channel: ChannelPotential,
        grid: &Grid1D,
        interaction: Option<&InteractionPotential>,
        par: &ParaxialConfig,
    ) -> Self {
        let xs = grid.points();
        let interaction = interaction.map(|v| {
            xs.iter()
                .flat_map(|&a| xs.iter().map(move |&b| (a - b).abs()))
                .map(|r| v.value(r))
                .collect()
        });
        Self {
            channel,
            xs,
            p0: par.p0,
            interaction,
            interaction_phase: OnceLock::new(),
        }
    }

    fn line_values(&self, t: f64) -> Vec<f64> {
        let d = self.channel.separation(self.p0 * t);
        self.xs.iter().map(|&x| self.channel.double_well(x, d)).collect()
    }
}

impl PotentialField for SweptChannelPair {
    fn time_dependent(&self) -> bool {
        true
    }

    fn values(&self, t: f64, out: &mut [f64]) {
        let u = self.line_values(t);
        let n = u.len();
        for i in 0..n {
            for j in 0..n {
                let v = self.interaction.as_ref().map_or(0.0, |w| w[i * n + j]);
                out[i * n + j] = u[i] + u[j] + v;
            }
        }
    }

    fn apply_phase(&self, t: f64, factor: f64, psi: &mut [Complex64]) {
        let line: Vec<Complex64> = self
            .line_values(t)
            .into_iter()
            .map(|u| Complex64::cis(-factor * u))
            .collect();
        let n = line.len();
        let pair_phase = |w: &Vec<f64>| -> Vec<Complex64> {
            w.iter().map(|v| Complex64::cis(-factor * v)).collect()
        };
        let cached;
        let pair: Option<&[Complex64]> = match &self.interaction {
            None => None,
            Some(w) => {
                let (f, phase) = self
                    .interaction_phase
                    .get_or_init(|| (factor, pair_phase(w)));
                if *f == factor {
                    Some(phase)
                } else {
                    cached = pair_phase(w);
                    Some(&cached)
                }
            }
        };
        for (i, row) in psi.chunks_exact_mut(n).enumerate() {
            let a = line[i];
            match pair {
                Some(p) => {
                    for ((v, &b), &c) in row.iter_mut().zip(&line).zip(&p[i * n..(i + 1) * n]) {
                        *v *= a * b * c;
                    }
                }
                None => {
                    for (v, &b) in row.iter_mut().zip(&line) {
                        *v *= a * b;
                    }
                }
            }
        }
    }
}

/// The groove surface seen from a frame moving with `p0` along `z`:
/// `U(x, ς + p0·t)` on a plane with rows `x` and columns `ς`.
#[derive(Debug, Clone)]
pub struct ComovingGroove {
    channel: ChannelPotential,
    xs: Vec<f64>,
    ss: Vec<f64>,
    p0: f64,
}

impl ComovingGroove {
    pub fn new(channel: ChannelPotential, x: &Grid1D, s: &Grid1D, par: &ParaxialConfig) -> Self {
        Self {
            channel,
            xs: x.points(),
            ss: s.points(),
            p0: par.p0,
        }
    }
}

impl PotentialField for ComovingGroove {
    fn time_dependent(&self) -> bool {
        true
    }

    fn values(&self, t: f64, out: &mut [f64]) {
        let ds: Vec<f64> = self
            .ss
            .iter()
            .map(|&s| self.channel.separation(s + self.p0 * t))
            .collect();
        let m = ds.len();
        for (i, &x) in self.xs.iter().enumerate() {
            for (j, &d) in ds.iter().enumerate() {
                out[i * m + j] = self.channel.double_well(x, d);
            }
        }
    }
}

/// Split-operator integrator bound to one grid shape and one potential.
pub struct SplitOperator<P> {
    potential: P,
    plan: SpectralPlan,
    kinetic_energy: Vec<f64>,
    kinetic_full: Vec<Complex64>,
    kinetic_half: Vec<Complex64>,
    static_phase: Option<Vec<Complex64>>,
    splitting: SplittingOrder,
    hbar: f64,
    dt: f64,
}

impl<P: PotentialField> SplitOperator<P> {
    pub fn new(axes: &Axes, potential: P, cfg: &PropagationConfig) -> Result<Self> {
        cfg.validate()?;
        let (rows, cols) = axes.shape();
        let kinetic_energy = kinetic_energies(axes, cfg.hbar);
        let mut op = Self {
            potential,
            plan: SpectralPlan::new(rows, cols),
            kinetic_energy,
            kinetic_full: Vec::new(),
            kinetic_half: Vec::new(),
            static_phase: None,
            splitting: cfg.splitting,
            hbar: cfg.hbar,
            dt: cfg.dt,
        };
        op.rebuild_phases();
        Ok(op)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn potential(&self) -> &P {
        &self.potential
    }

    /// Flips the sign of the time step.
    pub fn reverse(&mut self) {
        self.dt = -self.dt;
        self.rebuild_phases();
    }

    fn rebuild_phases(&mut self) {
        let n = self.kinetic_energy.len() as f64;
        let phase = |h: f64| -> Vec<Complex64> {
            self.kinetic_energy
                .iter()
                .map(|e| Complex64::cis(-e * h / self.hbar) / n)
                .collect()
        };
        // 1/N undoes the unnormalized forward/inverse transform pair.
        self.kinetic_full = phase(self.dt);
        self.kinetic_half = phase(0.5 * self.dt);
        self.static_phase = (!self.potential.time_dependent()).then(|| {
            let mut ones = vec![Complex64::new(1.0, 0.0); self.kinetic_energy.len()];
            self.potential.apply_phase(0.0, self.dt / self.hbar, &mut ones);
            ones
        });
    }

    fn kinetic(&mut self, psi: &mut [Complex64], half: bool) {
        let phase = if half { &self.kinetic_half } else { &self.kinetic_full };
        self.plan.multiply_spectral(psi, phase);
    }

    fn potential_step(&self, psi: &mut [Complex64], t: f64) {
        match &self.static_phase {
            Some(phase) => psi.iter_mut().zip(phase).for_each(|(p, f)| *p *= f),
            None => self.potential.apply_phase(t, self.dt / self.hbar, psi),
        }
    }

    /// One full step starting at time `t`.
    pub fn step(&mut self, psi: &mut [Complex64], t: f64) {
        match self.splitting {
            SplittingOrder::Lie => {
                self.potential_step(psi, t);
                self.kinetic(psi, false);
            }
            SplittingOrder::Strang => {
                self.kinetic(psi, true);
                self.potential_step(psi, t + 0.5 * self.dt);
                self.kinetic(psi, true);
            }
        }
    }

    /// Advances `steps` steps from `t0`. Adjacent Strang half steps are fused
    /// between samples; `observe` sees the field every `stride` steps and at
    /// the end (including step 0).
    pub fn evolve<F>(
        &mut self,
        field: &mut WaveField,
        t0: f64,
        steps: usize,
        stride: usize,
        mut observe: F,
    ) -> Result<()>
    where
        F: FnMut(usize, f64, &WaveField) -> Result<()>,
    {
        let stride = stride.max(1);
        observe(0, t0, field)?;
        let mut done = 0;
        while done < steps {
            let block = stride.min(steps - done);
            let psi = field.amplitudes_mut();
            match self.splitting {
                SplittingOrder::Lie => {
                    for s in done..done + block {
                        self.step(psi, t0 + s as f64 * self.dt);
                    }
                }
                SplittingOrder::Strang => {
                    self.kinetic(psi, true);
                    for s in done..done + block {
                        self.potential_step(psi, t0 + (s as f64 + 0.5) * self.dt);
                        if s + 1 < done + block {
                            self.kinetic(psi, false);
                        }
                    }
                    self.kinetic(psi, true);
                }
            }
            done += block;
            observe(done, t0 + done as f64 * self.dt, field)?;
        }
        Ok(())
    }
}

/// `ħ²k²/2` in the spectral layout of `SpectralPlan::multiply_spectral`
/// (column-major for planes).
fn kinetic_energies(axes: &Axes, hbar: f64) -> Vec<f64> {
    let (k_outer, k_inner) = match axes {
        Axes::Line(g) => (vec![0.0], g.wavenumbers()),
        Axes::Plane(a, b) => (b.wavenumbers(), a.wavenumbers()),
    };
    k_outer
        .iter()
        .flat_map(|&ko| k_inner.iter().map(move |&ki| 0.5 * hbar * hbar * (ko * ko + ki * ki)))
        .collect()
}

/// Applies a single step to `field` starting at time `t`.
pub fn step<P: PotentialField>(
    field: &mut WaveField,
    potential: P,
    cfg: &PropagationConfig,
    t: f64,
) -> Result<()> {
    let mut op = SplitOperator::new(field.axes(), potential, cfg)?;
    op.step(field.amplitudes_mut(), t);
    Ok(())
}

/// Magnitude of the leading splitting correction for a harmonic well of
/// frequency `omega`: `|(Δt²ω²/4)⟨xp + px⟩/ħ|`.
pub fn step_error_estimate(field: &WaveField, omega: f64, cfg: &PropagationConfig) -> Result<f64> {
    let xp = field.symmetrized_xp(cfg.hbar)?;
    Ok((cfg.dt * cfg.dt * omega * omega / 4.0 * xp / cfg.hbar).abs())
}

/// One recorded instant of a run. For a single particle `first`/`second`
/// are the left/right valley probabilities; for a pair they are the
/// same-channel/different-channel probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub first: f64,
    pub second: f64,
    pub norm: f64,
}

#[derive(Debug, Clone)]
pub struct Frame {
    pub t: f64,
    pub density: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub samples: Vec<Sample>,
    pub frames: Vec<Frame>,
    pub final_field: WaveField,
    pub max_norm_drift: f64,
    pub max_tail_mass: f64,
    /// Largest exchange-symmetry defect seen (pair runs only).
    pub max_exchange_defect: Option<f64>,
    /// Time average of `step_error_estimate` (single-particle runs only).
    pub mean_error_estimate: Option<f64>,
}

impl RunRecord {
    pub fn final_sample(&self) -> Sample {
        *self.samples.last().expect("at least the initial sample")
    }
}

/// Paraxial propagation through the swept coupler. A line field is one
/// particle; a square plane is a pair `(x1, x2)` with optional interaction.
pub fn propagate_paraxial(
    initial: &WaveField,
    channel: &ChannelPotential,
    interaction: Option<&InteractionPotential>,
    par: &ParaxialConfig,
    cfg: &PropagationConfig,
) -> Result<RunRecord> {
    cfg.validate()?;
    check_positive("p0", par.p0)?;
    par.check_decoupled(channel, cfg.t_start)?;
    match initial.axes() {
        Axes::Line(g) => {
            let pot = SweptChannel::new(*channel, g, par);
            let omega = channel.omega();
            run_recorded(initial, pot, cfg, None, move |f| {
                let lr = grid::probability_left_right(f)?;
                Ok(((lr.left, lr.right), Some(step_error_estimate(f, omega, cfg)?)))
            })
        }
        Axes::Plane(a, b) => {
            if a != b {
                return Err(Error::InvalidParameter {
                    field: "axes",
                    reason: "pair fields need the same grid for both particles".into(),
                });
            }
            let pot = SweptChannelPair::new(*channel, a, interaction, par);
            let parity = exchange_parity(initial);
            run_recorded(initial, pot, cfg, parity, |f| {
                let q = grid::quadrant_probabilities(f)?;
                Ok(((q.same, q.different), None))
            })
        }
    }
}

/// Exchange sign of a pair field, if it has one.
fn exchange_parity(field: &WaveField) -> Option<f64> {
    let scale = field.amplitudes().iter().fold(0.0f64, |m, c| m.max(c.norm()));
    [1.0, -1.0]
        .into_iter()
        .find(|&s| field.exchange_defect(s).is_ok_and(|d| d <= 1e-8 * scale))
}

type Observation = ((f64, f64), Option<f64>);

fn run_recorded<P, F>(
    initial: &WaveField,
    potential: P,
    cfg: &PropagationConfig,
    parity: Option<f64>,
    measure: F,
) -> Result<RunRecord>
where
    P: PotentialField,
    F: Fn(&WaveField) -> Result<Observation>,
{
    let mut op = SplitOperator::new(initial.axes(), potential, cfg)?;
    let mut field = initial.clone();
    let norm0 = field.norm();
    let mut samples = Vec::new();
    let mut frames = Vec::new();
    let mut max_drift: f64 = 0.0;
    let mut max_tail: f64 = 0.0;
    let mut max_defect: Option<f64> = parity.map(|_| 0.0);
    let mut err_sum = 0.0;
    let mut err_count = 0usize;
    let n_steps = cfg.n_steps();
    op.evolve(
        &mut field,
        cfg.t_start,
        n_steps,
        cfg.snapshot_stride,
        |step, t, f| {
            let tail = f.boundary_tail_mass();
            if tail > BOUNDARY_ABORT_MASS {
                return Err(Error::BoundaryMass {
                    t,
                    mass: tail,
                    limit: BOUNDARY_ABORT_MASS,
                });
            }
            max_tail = max_tail.max(tail);
            let norm = f.norm();
            max_drift = max_drift.max((norm - norm0).abs());
            if let (Some(sign), Some(m)) = (parity, max_defect.as_mut()) {
                *m = m.max(f.exchange_defect(sign)?);
            }
            let ((first, second), err) = measure(f)?;
            if let Some(e) = err {
                err_sum += e;
                err_count += 1;
            }
            samples.push(Sample {
                t,
                first,
                second,
                norm,
            });
            let frame_due = cfg.frame_stride > 0 && (step % cfg.frame_stride == 0 || step == n_steps);
            if frame_due {
                frames.push(Frame {
                    t,
                    density: f.density(),
                });
            }
            Ok(())
        },
    )?;
    Ok(RunRecord {
        samples,
        frames,
        final_field: field,
        max_norm_drift: max_drift,
        max_tail_mass: max_tail,
        max_exchange_defect: max_defect,
        mean_error_estimate: (err_count > 0).then(|| err_sum / err_count as f64),
    })
}

/// Probability in each channel of an `(x, ς)` plane, integrating over `ς`.
pub fn channel_left_right(field: &WaveField) -> Result<LeftRight> {
    let (x, s) = field.plane_grids()?;
    let cols = s.len();
    let mut lr = LeftRight {
        left: 0.0,
        right: 0.0,
    };
    for i in 0..x.len() {
        let w = x.right_weight(i);
        let m: f64 = field.amplitudes()[i * cols..(i + 1) * cols]
            .iter()
            .map(|c| c.norm_sqr())
            .sum();
        lr.right += w * m;
        lr.left += (1.0 - w) * m;
    }
    let dv = field.axes().cell_volume();
    lr.left *= dv;
    lr.right *= dv;
    Ok(lr)
}

/// Single-particle packet for the full 2D run: ground-state width in `x`
/// about the right channel, density width `sigma_z` in the co-moving `ς`.
pub fn comoving_packet(
    channel: &ChannelPotential,
    x: Grid1D,
    s: Grid1D,
    hbar: f64,
    sigma_z: f64,
) -> Result<WaveField> {
    check_positive("sigma_z", sigma_z)?;
    let across = grid::gaussian_packet(x, channel.asymptotic_center(), channel.omega(), hbar, None)?;
    // Density std sigma_z ⇔ amplitude exp(-ς²/(4σ²)) ⇔ "omega" ħ/(2σ²).
    let along = grid::gaussian_packet(s, 0.0, hbar / (2.0 * sigma_z * sigma_z), hbar, None)?;
    let mut f = WaveField::outer(&across, &along)?;
    f.normalize();
    Ok(f)
}

#[derive(Debug, Clone)]
pub struct Comoving2dRun {
    pub record: RunRecord,
    pub exit: LeftRight,
    /// Probability moving backwards in the lab frame at the end.
    pub backscattered: f64,
}

/// Full two-dimensional propagation, written in the frame co-moving with
/// `p0` so the window only has to hold the packet, not its whole path.
/// `initial` is a plane with rows `x` and columns `ς`.
pub fn propagate_2d(
    initial: &WaveField,
    channel: &ChannelPotential,
    par: &ParaxialConfig,
    cfg: &PropagationConfig,
) -> Result<Comoving2dRun> {
    cfg.validate()?;
    check_positive("p0", par.p0)?;
    let (x, s) = initial.plane_grids()?;
    let pot = ComovingGroove::new(*channel, &x, &s, par);
    let record = run_recorded(initial, pot, cfg, None, |f| {
        let lr = channel_left_right(f)?;
        Ok(((lr.left, lr.right), None))
    })?;
    let exit = channel_left_right(&record.final_field)?;
    let backscattered = record
        .final_field
        .mass_below_wavenumber(1, -par.p0 / cfg.hbar);
    Ok(Comoving2dRun {
        record,
        exit,
        backscattered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::gaussian_packet;

    fn cfg(dt: f64, t_end: f64, splitting: SplittingOrder) -> PropagationConfig {
        PropagationConfig {
            dt,
            t_start: 0.0,
            t_end,
            splitting,
            hbar: 6.0,
            snapshot_stride: 50,
            frame_stride: 0,
        }
    }

    #[test]
    fn config_validation() {
        let mut c = PropagationConfig::default();
        assert!(c.validate().is_ok());
        assert_eq!(c.n_steps(), 20_000);
        c.dt = 0.0;
        assert!(c.validate().is_err());
        c.dt = 0.001;
        c.t_end = c.t_start;
        assert!(c.validate().is_err());
    }

    #[test]
    fn free_gaussian_spreads_like_closed_form() {
        let g = Grid1D::new(512, -32.0, 32.0).unwrap();
        let sigma0: f64 = 2.0;
        let hbar = 6.0;
        let mut f = gaussian_packet(g, 0.0, hbar / (2.0 * sigma0 * sigma0), hbar, None).unwrap();
        let c = cfg(0.001, 1.0, SplittingOrder::Strang);
        let mut op = SplitOperator::new(f.axes(), StaticPotential::zero(g.len()), &c).unwrap();
        op.evolve(&mut f, 0.0, 1000, 1000, |_, _, _| Ok(())).unwrap();
        let t = 1.0;
        let expected = sigma0 * sigma0 + (hbar * t / (2.0 * sigma0)).powi(2);
        let var = f.position_variance(0);
        assert!((var - expected).abs() < 1e-4, "{var} vs {expected}");
    }

    #[test]
    fn harmonic_ground_state_is_stationary() {
        let g = Grid1D::transverse_default();
        let (omega, hbar) = (30.0, 6.0);
        let psi0 = gaussian_packet(g, 0.0, omega, hbar, None).unwrap();
        let pot = StaticPotential::from_fn_1d(&g, |x| 0.5 * omega * omega * x * x);
        let c = cfg(0.001, 1.0, SplittingOrder::Strang);
        let mut f = psi0.clone();
        let mut op = SplitOperator::new(f.axes(), pot, &c).unwrap();
        op.evolve(&mut f, 0.0, 1000, 100, |_, _, _| Ok(())).unwrap();
        let fidelity = psi0.overlap(&f).norm();
        assert!((fidelity - 1.0).abs() < 1e-6, "fidelity {fidelity}");
    }

    #[test]
    fn coherent_state_returns_after_one_period() {
        let g = Grid1D::transverse_default();
        let (omega, hbar) = (30.0, 6.0);
        let period = 2.0 * std::f64::consts::PI / omega;
        let mut f = gaussian_packet(g, 1.0, omega, hbar, None).unwrap();
        let pot = StaticPotential::from_fn_1d(&g, |x| 0.5 * omega * omega * x * x);
        let steps = 400;
        let c = cfg(period / steps as f64, period, SplittingOrder::Strang);
        let mut op = SplitOperator::new(f.axes(), pot, &c).unwrap();
        let mut half_way = 0.0;
        op.evolve(&mut f, 0.0, steps, steps / 2, |s, _, f| {
            if s == steps / 2 {
                half_way = f.mean_position(0);
            }
            Ok(())
        })
        .unwrap();
        // Classical trajectory x(t) = cos(ωt).
        assert!((half_way + 1.0).abs() < 1e-3, "half period at {half_way}");
        assert!((f.mean_position(0) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn fused_evolution_matches_single_steps() {
        let g = Grid1D::new(128, -8.0, 8.0).unwrap();
        let ch = ChannelPotential::new(30.0, 1.8903, 30.0).unwrap();
        let par = ParaxialConfig::default();
        let c = cfg(0.001, 0.05, SplittingOrder::Strang);
        let psi0 = gaussian_packet(g, 1.9, 30.0, 6.0, None).unwrap();
        let mut a = psi0.clone();
        let mut b = psi0.clone();
        let mut op = SplitOperator::new(a.axes(), SweptChannel::new(ch, &g, &par), &c).unwrap();
        op.evolve(&mut a, -1.0, 50, 7, |_, _, _| Ok(())).unwrap();
        for s in 0..50 {
            op.step(b.amplitudes_mut(), -1.0 + s as f64 * 0.001);
        }
        assert!(a.max_difference(&b) < 1e-12);
    }

    #[test]
    fn error_estimate_vanishes_for_real_states_and_scales_with_dt_squared() {
        let g = Grid1D::transverse_default();
        let real = gaussian_packet(g, 0.0, 30.0, 6.0, None).unwrap();
        let c = cfg(0.001, 1.0, SplittingOrder::Lie);
        assert!(step_error_estimate(&real, 30.0, &c).unwrap() < 1e-10);

        // A chirped packet has ⟨xp + px⟩ ≠ 0.
        let chirped = WaveField::from_fn_1d(g, |x| {
            Complex64::from_polar((-2.5 * (x - 1.0).powi(2)).exp(), 0.8 * x * x)
        });
        let e1 = step_error_estimate(&chirped, 30.0, &c).unwrap();
        let c2 = PropagationConfig { dt: 0.002, ..c };
        let e2 = step_error_estimate(&chirped, 30.0, &c2).unwrap();
        assert!(e1 > 0.0);
        assert!((e2 / e1 - 4.0).abs() < 1e-12);
    }

    #[test]
    fn paraxial_rejects_coupled_start() {
        let g = Grid1D::transverse_default();
        let ch = ChannelPotential::new(30.0, 1.8903, 30.0).unwrap();
        let f = gaussian_packet(g, ch.asymptotic_center(), 30.0, 6.0, None).unwrap();
        let c = PropagationConfig {
            t_start: -1.0,
            t_end: 1.0,
            ..Default::default()
        };
        let err = propagate_paraxial(&f, &ch, None, &ParaxialConfig::default(), &c).unwrap_err();
        assert!(matches!(err, Error::NotDecoupled { .. }));
    }

    #[test]
    fn boundary_mass_aborts() {
        let g = Grid1D::new(64, -4.0, 4.0).unwrap();
        // A fast packet that wraps around the periodic box.
        let f = gaussian_packet(g, 2.0, 30.0, 6.0, Some(400.0)).unwrap();
        let c = cfg(0.001, 0.1, SplittingOrder::Strang);
        let err = run_recorded(&f, StaticPotential::zero(64), &c, None, |_| Ok(((0.0, 0.0), None)))
            .unwrap_err();
        assert!(matches!(err, Error::BoundaryMass { .. }));
    }
}
