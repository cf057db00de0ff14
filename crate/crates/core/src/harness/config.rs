//! Run configuration: one TOML file per run.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::potential::{ChannelPotential, InteractionKind, InteractionPotential};
use crate::propagator::{ParaxialConfig, PropagationConfig, SplittingOrder};
use crate::twoparticle::{PairSetup, Statistics};

use super::recipes::Recipe;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: String,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Every pipeline is deterministic; kept so manifests say so.
    #[serde(default = "yes")]
    pub deterministic: bool,
    #[serde(default)]
    pub channel: ChannelParams,
    #[serde(default)]
    pub numerics: NumericsParams,
    #[serde(default)]
    pub pair: PairParams,
    #[serde(default)]
    pub interaction: Option<InteractionParams>,
    #[serde(default)]
    pub plane: PlaneParams,
    #[serde(default)]
    pub sweep: SweepParams,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelParams {
    pub omega: f64,
    pub d0: f64,
    pub eta: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            omega: 30.0,
            d0: 1.8903,
            eta: 30.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericsParams {
    pub hbar: f64,
    pub dt: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub splitting: SplittingOrder,
    pub p0: f64,
    pub grid_points: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub snapshot_stride: usize,
    pub frame_stride: usize,
    pub decoupling_tolerance: f64,
}

impl Default for NumericsParams {
    fn default() -> Self {
        Self {
            hbar: 6.0,
            dt: 0.001,
            t_start: -10.0,
            t_end: 10.0,
            splitting: SplittingOrder::Strang,
            p0: 30.0,
            grid_points: 256,
            x_min: -8.0,
            x_max: 8.0,
            snapshot_stride: 100,
            frame_stride: 2000,
            decoupling_tolerance: ParaxialConfig::default().decoupling_tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PairParams {
    pub statistics: Statistics,
}

impl Default for PairParams {
    fn default() -> Self {
        Self {
            statistics: Statistics::Boson,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InteractionShape {
    Coulomb,
    LennardJones,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InteractionParams {
    pub kind: InteractionShape,
    pub v0: f64,
    pub epsilon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
}

impl InteractionParams {
    pub fn coulomb(v0: f64, epsilon: f64) -> Self {
        Self {
            kind: InteractionShape::Coulomb,
            v0,
            epsilon,
            b: None,
        }
    }

    pub fn lennard_jones(v0: f64, epsilon: f64, b: f64) -> Self {
        Self {
            kind: InteractionShape::LennardJones,
            v0,
            epsilon,
            b: Some(b),
        }
    }

    pub fn kind(&self) -> Result<InteractionKind> {
        match (self.kind, self.b) {
            (InteractionShape::Coulomb, _) => Ok(InteractionKind::Coulomb),
            (InteractionShape::LennardJones, Some(b)) => Ok(InteractionKind::LennardJones { b }),
            (InteractionShape::LennardJones, None) => Err(Error::InvalidParameter {
                field: "interaction.b",
                reason: "Lennard-Jones needs a range b".into(),
            }),
        }
    }

    pub fn potential(&self) -> Result<InteractionPotential> {
        InteractionPotential::new(self.kind()?, self.v0, self.epsilon)
    }
}

/// Full two-dimensional `(x, ς)` runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlaneParams {
    pub s_points: usize,
    pub s_min: f64,
    pub s_max: f64,
    pub sigma_z: f64,
}

impl Default for PlaneParams {
    fn default() -> Self {
        Self {
            s_points: 256,
            s_min: -64.0,
            s_max: 64.0,
            sigma_z: 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepParams {
    /// Runs per interaction family.
    pub points: usize,
    /// Largest `|V̄|/(2ħΩ)` covered by sweeps.
    pub abscissa_max: f64,
    /// Lower end of the `d0²` range of tunneling curves.
    pub d0_sq_min: f64,
    pub d0_sq_max: f64,
    pub d0_sq_points: usize,
    /// `d0²` interval used for the `log T` fit.
    pub fit_min: f64,
    pub fit_max: f64,
}

impl Default for SweepParams {
    fn default() -> Self {
        Self {
            points: 15,
            abscissa_max: 2.5,
            d0_sq_min: 0.5,
            d0_sq_max: 6.0,
            d0_sq_points: 12,
            fit_min: 3.5,
            fit_max: 6.0,
        }
    }
}

impl RunConfig {
    /// Defaults for a named recipe (not yet validated against the registry).
    pub fn for_experiment(name: &str) -> Self {
        Self {
            experiment: name.to_string(),
            output_dir: default_output_dir(),
            deterministic: true,
            channel: ChannelParams::default(),
            numerics: NumericsParams::default(),
            pair: PairParams::default(),
            interaction: None,
            plane: PlaneParams::default(),
            sweep: SweepParams::default(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Checks every field and reports all violations at once.
    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        positive(&mut bad, "channel.omega", self.channel.omega);
        positive(&mut bad, "channel.d0", self.channel.d0);
        positive(&mut bad, "channel.eta", self.channel.eta);
        let n = &self.numerics;
        positive(&mut bad, "numerics.hbar", n.hbar);
        positive(&mut bad, "numerics.dt", n.dt);
        positive(&mut bad, "numerics.p0", n.p0);
        positive(&mut bad, "numerics.decoupling_tolerance", n.decoupling_tolerance);
        positive(&mut bad, "plane.sigma_z", self.plane.sigma_z);
        positive(&mut bad, "sweep.abscissa_max", self.sweep.abscissa_max);
        positive(&mut bad, "sweep.d0_sq_min", self.sweep.d0_sq_min);
        positive(&mut bad, "sweep.d0_sq_max", self.sweep.d0_sq_max);
        if let Some(i) = &self.interaction {
            positive(&mut bad, "interaction.epsilon", i.epsilon);
            if !i.v0.is_finite() {
                bad.push(format!("interaction.v0 must be finite (got {})", i.v0));
            }
            match (i.kind, i.b) {
                (InteractionShape::LennardJones, None) => {
                    bad.push("interaction.b is required for lennard-jones".into())
                }
                (InteractionShape::LennardJones, Some(b)) => positive(&mut bad, "interaction.b", b),
                (InteractionShape::Coulomb, Some(_)) => {
                    bad.push("interaction.b only applies to lennard-jones".into())
                }
                (InteractionShape::Coulomb, None) => {}
            }
        }
        if !(n.t_start.is_finite() && n.t_end.is_finite() && n.t_end > n.t_start) {
            bad.push(format!(
                "numerics.t_end must exceed numerics.t_start (got [{}, {}])",
                n.t_start, n.t_end
            ));
        }
        let check_grid = |bad: &mut Vec<String>, name: &str, points: usize, lo: f64, hi: f64| {
            if let Err(e) = Grid1D::new(points, lo, hi) {
                bad.push(format!("{name}: {e}"));
            }
        };
        check_grid(&mut bad, "numerics grid", n.grid_points, n.x_min, n.x_max);
        check_grid(&mut bad, "plane grid", self.plane.s_points, self.plane.s_min, self.plane.s_max);
        if n.snapshot_stride == 0 {
            bad.push("numerics.snapshot_stride must be at least 1".into());
        } else if n.frame_stride % n.snapshot_stride != 0 {
            bad.push(format!(
                "numerics.frame_stride ({}) must be a multiple of numerics.snapshot_stride ({})",
                n.frame_stride, n.snapshot_stride
            ));
        }
        if self.sweep.points == 0 {
            bad.push("sweep.points must be at least 1".into());
        }
        if self.sweep.d0_sq_points < 2 {
            bad.push("sweep.d0_sq_points must be at least 2".into());
        }
        if self.sweep.d0_sq_max <= self.sweep.d0_sq_min {
            bad.push("sweep.d0_sq_max must exceed sweep.d0_sq_min".into());
        }
        if self.sweep.fit_max <= self.sweep.fit_min {
            bad.push("sweep.fit_max must exceed sweep.fit_min".into());
        }
        if Recipe::from_name(&self.experiment).is_err() {
            bad.push(format!(
                "experiment `{}` is not one of: {}",
                self.experiment,
                Recipe::names().join(", ")
            ));
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(bad))
        }
    }

    pub fn channel(&self) -> Result<ChannelPotential> {
        ChannelPotential::new(self.channel.omega, self.channel.d0, self.channel.eta)
    }

    pub fn grid(&self) -> Result<Grid1D> {
        Grid1D::new(self.numerics.grid_points, self.numerics.x_min, self.numerics.x_max)
    }

    pub fn plane_grids(&self) -> Result<(Grid1D, Grid1D)> {
        let s = Grid1D::new(self.plane.s_points, self.plane.s_min, self.plane.s_max)?;
        Ok((self.grid()?, s))
    }

    pub fn propagation(&self) -> PropagationConfig {
        let n = &self.numerics;
        PropagationConfig {
            dt: n.dt,
            t_start: n.t_start,
            t_end: n.t_end,
            splitting: n.splitting,
            hbar: n.hbar,
            snapshot_stride: n.snapshot_stride,
            frame_stride: n.frame_stride,
        }
    }

    pub fn paraxial(&self) -> ParaxialConfig {
        ParaxialConfig {
            p0: self.numerics.p0,
            decoupling_tolerance: self.numerics.decoupling_tolerance,
        }
    }

    pub fn interaction(&self) -> Result<Option<InteractionPotential>> {
        self.interaction.as_ref().map(InteractionParams::potential).transpose()
    }

    pub fn pair_setup(&self) -> Result<PairSetup> {
        Ok(PairSetup {
            channel: self.channel()?,
            grid: self.grid()?,
            par: self.paraxial(),
            cfg: self.propagation(),
        })
    }

    /// TOML text with every non-paper default marked `# artifact default`.
    pub fn emit(&self) -> String {
        let mut w = Emitter::default();
        w.line("# groovesim run configuration");
        w.kv("experiment", quote(&self.experiment), false);
        w.kv(
            "output_dir",
            quote(&self.output_dir.to_string_lossy()),
            self.output_dir == default_output_dir(),
        );
        w.kv("deterministic", self.deterministic.to_string(), self.deterministic);

        let c = &self.channel;
        w.section("channel");
        w.kv("omega", num(c.omega), false);
        w.kv("d0", num(c.d0), false);
        w.kv("eta", num(c.eta), false);

        let (n, dn) = (&self.numerics, NumericsParams::default());
        w.section("numerics");
        w.kv("hbar", num(n.hbar), false);
        w.kv("dt", num(n.dt), false);
        w.kv("t_start", num(n.t_start), false);
        w.kv("t_end", num(n.t_end), false);
        w.kv("splitting", quote(splitting_name(n.splitting)), n.splitting == dn.splitting);
        w.kv("p0", num(n.p0), false);
        w.kv("grid_points", n.grid_points.to_string(), n.grid_points == dn.grid_points);
        w.kv("x_min", num(n.x_min), n.x_min == dn.x_min);
        w.kv("x_max", num(n.x_max), n.x_max == dn.x_max);
        w.kv("snapshot_stride", n.snapshot_stride.to_string(), n.snapshot_stride == dn.snapshot_stride);
        w.kv("frame_stride", n.frame_stride.to_string(), n.frame_stride == dn.frame_stride);
        w.kv(
            "decoupling_tolerance",
            num(n.decoupling_tolerance),
            n.decoupling_tolerance == dn.decoupling_tolerance,
        );

        w.section("pair");
        w.kv(
            "statistics",
            quote(self.pair.statistics.name()),
            self.pair.statistics == PairParams::default().statistics,
        );

        if let Some(i) = &self.interaction {
            w.section("interaction");
            let kind = match i.kind {
                InteractionShape::Coulomb => "coulomb",
                InteractionShape::LennardJones => "lennard-jones",
            };
            w.kv("kind", quote(kind), false);
            w.kv("v0", num(i.v0), false);
            w.kv("epsilon", num(i.epsilon), false);
            if let Some(b) = i.b {
                w.kv("b", num(b), false);
            }
        }

        let (p, dp) = (&self.plane, PlaneParams::default());
        w.section("plane");
        w.kv("s_points", p.s_points.to_string(), p.s_points == dp.s_points);
        w.kv("s_min", num(p.s_min), p.s_min == dp.s_min);
        w.kv("s_max", num(p.s_max), p.s_max == dp.s_max);
        w.kv("sigma_z", num(p.sigma_z), p.sigma_z == dp.sigma_z);

        let (s, ds) = (&self.sweep, SweepParams::default());
        w.section("sweep");
        w.kv("points", s.points.to_string(), s.points == ds.points);
        w.kv("abscissa_max", num(s.abscissa_max), s.abscissa_max == ds.abscissa_max);
        w.kv("d0_sq_min", num(s.d0_sq_min), s.d0_sq_min == ds.d0_sq_min);
        w.kv("d0_sq_max", num(s.d0_sq_max), s.d0_sq_max == ds.d0_sq_max);
        w.kv("d0_sq_points", s.d0_sq_points.to_string(), s.d0_sq_points == ds.d0_sq_points);
        w.kv("fit_min", num(s.fit_min), s.fit_min == ds.fit_min);
        w.kv("fit_max", num(s.fit_max), s.fit_max == ds.fit_max);
        w.out
    }
}

fn positive(bad: &mut Vec<String>, name: &str, v: f64) {
    if !(v.is_finite() && v > 0.0) {
        bad.push(format!("{name} must be finite and > 0 (got {v})"));
    }
}

fn splitting_name(s: SplittingOrder) -> &'static str {
    match s {
        SplittingOrder::Lie => "lie",
        SplittingOrder::Strang => "strang",
    }
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

/// Shortest round-trip float text, always with a decimal point or exponent.
fn num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:?}")
}

#[derive(Default)]
struct Emitter {
    out: String,
}

impl Emitter {
    fn line(&mut self, s: &str) {
        self.out.push_str(s);
        self.out.push('\n');
    }

    fn section(&mut self, name: &str) {
        let _ = write!(self.out, "\n[{name}]\n");
    }

    fn kv(&mut self, key: &str, value: String, artifact_default: bool) {
        let _ = write!(self.out, "{key} = {value}");
        if artifact_default {
            self.out.push_str("  # artifact default");
        }
        self.out.push('\n');
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_round_trips() {
        let cfg = RunConfig::for_experiment("fig6");
        let text = cfg.emit();
        assert_eq!(RunConfig::parse(&text).unwrap(), cfg);
        assert!(text.contains("grid_points = 256  # artifact default"));
        assert!(text.contains("d0 = 1.8903\n"));
    }

    #[test]
    fn interaction_round_trips() {
        let mut cfg = RunConfig::for_experiment("fig12");
        cfg.interaction = Some(InteractionParams::lennard_jones(-12.5, 0.2, 0.25));
        cfg.numerics.dt = 1e-5;
        let back = RunConfig::parse(&cfg.emit()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.interaction().unwrap().unwrap().v0(), -12.5);
    }

    #[test]
    fn validation_lists_every_bad_field() {
        let mut cfg = RunConfig::for_experiment("fig99");
        cfg.numerics.dt = -1.0;
        cfg.channel.omega = 0.0;
        cfg.numerics.grid_points = 100;
        cfg.interaction = Some(InteractionParams {
            kind: InteractionShape::LennardJones,
            v0: 1.0,
            epsilon: 0.2,
            b: None,
        });
        let Err(Error::InvalidConfig(msgs)) = cfg.validate() else {
            panic!("expected InvalidConfig");
        };
        let joined = msgs.join("\n");
        for needle in ["numerics.dt", "channel.omega", "numerics grid", "interaction.b", "fig99"] {
            assert!(joined.contains(needle), "missing {needle} in\n{joined}");
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = "experiment = \"fig6\"\n[channel]\nomegaa = 3.0\n";
        assert!(matches!(RunConfig::parse(text), Err(Error::ConfigParse(_))));
    }

    #[test]
    fn partial_file_takes_defaults() {
        let cfg = RunConfig::parse("experiment = \"fig7\"\n[channel]\nd0 = 2.0\n").unwrap();
        assert_eq!(cfg.channel.d0, 2.0);
        assert_eq!(cfg.numerics, NumericsParams::default());
        cfg.validate().unwrap();
    }
}
