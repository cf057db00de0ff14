//! Two identical particles entering the coupler one per channel.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use crate::analytic::Statistics;
use crate::error::{Error, Result};
use crate::grid::{gaussian_packet, Grid1D, WaveField};
use crate::potential::{ChannelPotential, InteractionKind, InteractionPotential};
use crate::propagator::{propagate_paraxial, ParaxialConfig, PropagationConfig, RunRecord};
use crate::spectrum::{bell_basis, localized_states, mean_interaction, BellBasis, DoubleWellSpectrum};

/// Fermionic pre-normalization norms below this are rejected.
pub const MIN_ANTISYMMETRIC_NORM: f64 = 1e-6;
/// Largest allowed change of `P_same` over the last tenth of a run.
pub const PLATEAU_TOLERANCE: f64 = 0.01;
/// Largest boundary tail mass a sweep point may reach and still be reported.
pub const REPORTED_TAIL_MASS: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct TwoParticleState {
    pub statistics: Statistics,
    pub field: WaveField,
    /// Packet centers `(left, right)`; one particle starts in each.
    pub centers: (f64, f64),
}

/// `φ_L(1)φ_R(2) ± φ_L(2)φ_R(1)` from ground-state-width packets sitting in
/// the asymptotic wells.
pub fn build_initial(
    statistics: Statistics,
    channel: &ChannelPotential,
    grid: Grid1D,
    hbar: f64,
) -> Result<TwoParticleState> {
    let c = channel.asymptotic_center();
    let left = gaussian_packet(grid, -c, channel.omega(), hbar, None)?;
    let right = gaussian_packet(grid, c, channel.omega(), hbar, None)?;
    let direct = WaveField::outer(&left, &right)?;
    let swapped = WaveField::outer(&right, &left)?;
    let sign = statistics.exchange_sign();
    let data: Vec<Complex64> = direct
        .amplitudes()
        .iter()
        .zip(swapped.amplitudes())
        .map(|(a, b)| a + sign * b)
        .collect();
    let mut field = WaveField::new(direct.axes().clone(), data)?;
    let norm = field.normalize();
    if norm < MIN_ANTISYMMETRIC_NORM {
        return Err(Error::DegenerateAntisymmetrization(norm));
    }
    Ok(TwoParticleState {
        statistics,
        field,
        centers: (-c, c),
    })
}

#[derive(Debug, Clone)]
pub struct StatisticsRun {
    pub record: RunRecord,
    pub p_same: f64,
    pub p_diff: f64,
    /// Spread of `P_same` over the last tenth of the run.
    pub plateau_variation: f64,
    pub plateau_ok: bool,
    /// First time `P_same` reaches `P_diff`.
    pub first_crossing: Option<f64>,
}

pub fn run_statistics_experiment(
    state: &TwoParticleState,
    channel: &ChannelPotential,
    interaction: Option<&InteractionPotential>,
    par: &ParaxialConfig,
    cfg: &PropagationConfig,
) -> Result<StatisticsRun> {
    let record = propagate_paraxial(&state.field, channel, interaction, par, cfg)?;
    let last = record.final_sample();
    let cutoff = cfg.t_end - 0.1 * (cfg.t_end - cfg.t_start);
    let (lo, hi) = record
        .samples
        .iter()
        .filter(|s| s.t >= cutoff - 1e-9)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
            (lo.min(s.first), hi.max(s.first))
        });
    let plateau_variation = hi - lo;
    let first_crossing = record
        .samples
        .iter()
        .find(|s| s.first >= s.second)
        .map(|s| s.t);
    Ok(StatisticsRun {
        p_same: last.first,
        p_diff: last.second,
        plateau_variation,
        plateau_ok: plateau_variation < PLATEAU_TOLERANCE,
        first_crossing,
        record,
    })
}

/// An interaction shape with its strength left free.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteractionFamily {
    pub kind: InteractionKind,
    pub epsilon: f64,
}

impl InteractionFamily {
    pub fn coulomb(epsilon: f64) -> Self {
        Self {
            kind: InteractionKind::Coulomb,
            epsilon,
        }
    }

    pub fn lennard_jones(b: f64, epsilon: f64) -> Self {
        Self {
            kind: InteractionKind::LennardJones { b },
            epsilon,
        }
    }

    pub fn with_v0(&self, v0: f64) -> Result<InteractionPotential> {
        InteractionPotential::new(self.kind, v0, self.epsilon)
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            InteractionKind::Coulomb => "coulomb",
            InteractionKind::LennardJones { .. } => "lennard-jones",
        }
    }

    pub fn b(&self) -> Option<f64> {
        match self.kind {
            InteractionKind::Coulomb => None,
            InteractionKind::LennardJones { b } => Some(b),
        }
    }

    pub fn label(&self) -> String {
        match self.b() {
            None => format!("coulomb eps={}", self.epsilon),
            Some(b) => format!("lj b={b} eps={}", self.epsilon),
        }
    }

    fn sort_key(&self) -> (u8, f64, f64) {
        match self.kind {
            InteractionKind::Coulomb => (0, 0.0, self.epsilon),
            InteractionKind::LennardJones { b } => (1, b, self.epsilon),
        }
    }
}

/// The five families of the universality comparison.
pub fn default_families() -> Vec<InteractionFamily> {
    vec![
        InteractionFamily::coulomb(0.1),
        InteractionFamily::coulomb(0.5),
        InteractionFamily::coulomb(1.0),
        InteractionFamily::lennard_jones(0.25, 0.2),
        InteractionFamily::lennard_jones(0.5, 0.35),
    ]
}

/// Everything a pair run needs besides the interaction.
#[derive(Debug, Clone)]
pub struct PairSetup {
    pub channel: ChannelPotential,
    pub grid: Grid1D,
    pub par: ParaxialConfig,
    pub cfg: PropagationConfig,
}

impl PairSetup {
    /// Ground doublet and Bell basis of the frozen double well at `z = 0`.
    pub fn reference(&self, spectrum: &DoubleWellSpectrum) -> Result<BellBasis> {
        let (l, r) = localized_states(spectrum);
        bell_basis(&l, &r)
    }

    pub fn run(&self, statistics: Statistics, interaction: Option<&InteractionPotential>) -> Result<StatisticsRun> {
        let state = build_initial(statistics, &self.channel, self.grid, self.cfg.hbar)?;
        run_statistics_experiment(&state, &self.channel, interaction, &self.par, &self.cfg)
    }

    /// Halves the step until the kinetic phase `ħk²Δt/2` of every grid mode
    /// stays below π. Above that, a steep interaction pumps resonant short
    /// waves that climb the groove walls to the window edge.
    pub fn resonance_free(&self) -> PairSetup {
        let k_max = std::f64::consts::PI / self.grid.dx();
        let limit = 2.0 * std::f64::consts::PI / (self.cfg.hbar * k_max * k_max);
        let mut out = self.clone();
        while out.cfg.dt >= limit {
            out.cfg.dt *= 0.5;
            out.cfg.snapshot_stride *= 2;
            out.cfg.frame_stride *= 2;
        }
        out
    }
}

/// One row of a sweep CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub kind: &'static str,
    pub v0: f64,
    pub epsilon: f64,
    pub b: Option<f64>,
    pub v_bar_exact: f64,
    pub v_bar_gaussian: f64,
    pub omega_split: f64,
    pub abscissa: f64,
    pub p_same: f64,
    pub p_diff: f64,
    pub plateau_ok: bool,
    /// Step the reported run used.
    pub dt: f64,
    pub error: Option<String>,
}

impl SweepPoint {
    pub fn family(&self) -> InteractionFamily {
        match self.b {
            None => InteractionFamily::coulomb(self.epsilon),
            Some(b) => InteractionFamily::lennard_jones(b, self.epsilon),
        }
    }

    pub fn succeeded(&self) -> bool {
        self.error.is_none()
    }
}

/// Final `(P_same, P_diff, plateau_ok)` of a run, or its error text.
type Outcome = std::result::Result<(f64, f64, bool), String>;

fn outcome(run: Result<StatisticsRun>) -> Outcome {
    let run = run.map_err(|e| e.to_string())?;
    let tail = run.record.max_tail_mass;
    if tail > REPORTED_TAIL_MASS {
        return Err(format!("boundary tail mass {tail:.3e} exceeds {REPORTED_TAIL_MASS:.0e}"));
    }
    Ok((run.p_same, run.p_diff, run.plateau_ok))
}

/// Runs at the configured step, then once more on the resonance-free step
/// if the first attempt left the reportable range. Returns the step used.
fn checked_outcome(
    setup: &PairSetup,
    statistics: Statistics,
    interaction: Option<&InteractionPotential>,
) -> (Outcome, f64) {
    let first = outcome(setup.run(statistics, interaction));
    let fine = setup.resonance_free();
    if first.is_ok() || fine.cfg.dt == setup.cfg.dt {
        return (first, setup.cfg.dt);
    }
    (outcome(fine.run(statistics, interaction)), fine.cfg.dt)
}

fn sweep_point(
    setup: &PairSetup,
    basis: &BellBasis,
    spectrum: &DoubleWellSpectrum,
    statistics: Statistics,
    family: InteractionFamily,
    v0: f64,
    free_run: Option<&(Outcome, f64)>,
) -> SweepPoint {
    let mut point = SweepPoint {
        kind: family.kind_name(),
        v0,
        epsilon: family.epsilon,
        b: family.b(),
        v_bar_exact: f64::NAN,
        v_bar_gaussian: f64::NAN,
        omega_split: spectrum.omega_split(),
        abscissa: f64::NAN,
        p_same: f64::NAN,
        p_diff: f64::NAN,
        plateau_ok: false,
        dt: setup.cfg.dt,
        error: None,
    };
    let result = match family.with_v0(v0) {
        Ok(v) => {
            let mean = mean_interaction(basis, &v, &setup.channel, setup.cfg.hbar);
            point.v_bar_exact = mean.exact;
            point.v_bar_gaussian = mean.gaussian;
            point.abscissa = mean.exact.abs() / spectrum.two_hbar_omega().abs();
            let (result, dt) = match (v0 == 0.0, free_run) {
                (true, Some(free)) => free.clone(),
                (true, None) => checked_outcome(setup, statistics, None),
                (false, _) => checked_outcome(setup, statistics, Some(&v)),
            };
            point.dt = dt;
            result
        }
        Err(e) => Err(e.to_string()),
    };
    match result {
        Ok((p_same, p_diff, plateau_ok)) => {
            point.p_same = p_same;
            point.p_diff = p_diff;
            point.plateau_ok = plateau_ok;
        }
        Err(e) => point.error = Some(e),
    }
    point
}

fn run_jobs(
    setup: &PairSetup,
    spectrum: &DoubleWellSpectrum,
    statistics: Statistics,
    jobs: Vec<(InteractionFamily, f64)>,
) -> Result<Vec<SweepPoint>> {
    let basis = setup.reference(spectrum)?;
    // Every family shares the same noninteracting run.
    let free_run = (jobs.iter().filter(|j| j.1 == 0.0).count() > 1)
        .then(|| checked_outcome(setup, statistics, None));
    let mut points: Vec<SweepPoint> = jobs
        .into_par_iter()
        .map(|(family, v0)| {
            sweep_point(setup, &basis, spectrum, statistics, family, v0, free_run.as_ref())
        })
        .collect();
    points.sort_by(|a, b| {
        let (ka, kb) = (a.family().sort_key(), b.family().sort_key());
        ka.0.cmp(&kb.0)
            .then(ka.1.total_cmp(&kb.1))
            .then(ka.2.total_cmp(&kb.2))
            .then(a.v0.total_cmp(&b.v0))
    });
    Ok(points)
}

/// Final channel statistics for each strength in `v0_grid`. Failed runs
/// keep their row with the error message and NaN probabilities.
pub fn interaction_sweep(
    setup: &PairSetup,
    spectrum: &DoubleWellSpectrum,
    statistics: Statistics,
    family: InteractionFamily,
    v0_grid: &[f64],
) -> Result<Vec<SweepPoint>> {
    let jobs = v0_grid.iter().map(|&v0| (family, v0)).collect();
    run_jobs(setup, spectrum, statistics, jobs)
}

/// `|V̄|/(2ħΩ)` per unit `V0`; `V̄` is linear in `V0`.
pub fn abscissa_per_v0(basis: &BellBasis, spectrum: &DoubleWellSpectrum, family: InteractionFamily) -> Result<f64> {
    let v = family.with_v0(1.0)?;
    let mean = mean_interaction(basis, &v, spectrum.channel(), spectrum.hbar());
    Ok(mean.exact.abs() / spectrum.two_hbar_omega().abs())
}

/// Boson `P_same` for every family at the requested abscissa values, with
/// `V0` solved from the linear dependence of `V̄` on `V0`.
pub fn universality_curve(
    setup: &PairSetup,
    spectrum: &DoubleWellSpectrum,
    families: &[InteractionFamily],
    abscissae: &[f64],
) -> Result<Vec<SweepPoint>> {
    let basis = setup.reference(spectrum)?;
    let mut jobs = Vec::new();
    for &family in families {
        let per_v0 = abscissa_per_v0(&basis, spectrum, family)?;
        jobs.extend(abscissae.iter().map(|&a| (family, a / per_v0)));
    }
    run_jobs(setup, spectrum, Statistics::Boson, jobs)
}

/// `n` log-spaced values from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
                .collect()
        }
    }
}
