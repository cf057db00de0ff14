use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use groovesim::analytic::{analytic_same_channel_probability, beamsplitter_statistics, Statistics};
use groovesim::harness::config::{InteractionParams, InteractionShape};
use groovesim::harness::{compare_2d_paraxial, run_experiment, Check, Recipe, RunConfig};
use groovesim::propagator::SplittingOrder;
use groovesim::scaling::{ScaledUnits, RB87_MASS};

#[derive(Parser)]
#[command(name = "groovesim", version, about = "Wave packets in a tunneling groove coupler")]
struct Cli {
    /// Worker threads for sweeps (default: all processors).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the scaled-unit conversion table.
    Units(UnitsArgs),
    /// Run a figure recipe by name or a TOML config file.
    Run {
        /// Recipe name (fig2 ... fig13) or path to a config file.
        target: String,
        /// Print the resolved config and exit.
        #[arg(long)]
        print_config: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Boson statistics against interaction strength for one family.
    Sweep(#[command(flatten)] Overrides),
    /// Transmission against the square of the minimum separation.
    Tunneling(#[command(flatten)] Overrides),
    /// P_same against |V_bar|/(2 hbar Omega) for all interaction families.
    Universality(#[command(flatten)] Overrides),
    /// Closed-form beam-splitter and four-state model predictions.
    Analytic {
        /// Largest |V_bar|/(2 hbar Omega) in the printed curve.
        #[arg(long, default_value_t = 2.5)]
        ratio_max: f64,
        #[arg(long, default_value_t = 26)]
        points: usize,
    },
    /// Full 2D run against the paraxial reduction.
    CompareParaxial {
        /// Largest accepted exit-probability discrepancy.
        #[arg(long, default_value_t = 0.05)]
        max_discrepancy: f64,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Args)]
struct UnitsArgs {
    /// Length scale xi in meters.
    #[arg(long, default_value_t = 100e-9)]
    length: f64,
    /// Time scale tau in seconds (default: chosen to give --hbar-eff).
    #[arg(long, allow_hyphen_values = true)]
    time: Option<f64>,
    /// Particle mass in kg (default: rubidium-87).
    #[arg(long, default_value_t = RB87_MASS)]
    mass: f64,
    #[arg(long, default_value_t = 6.0)]
    hbar_eff: f64,
    #[arg(long, default_value_t = 30.0)]
    omega: f64,
    #[arg(long, default_value_t = 30.0)]
    pz: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Splitting {
    Lie,
    Strang,
}

#[derive(Clone, Copy, ValueEnum)]
enum Stats {
    Boson,
    Fermion,
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    None,
    Coulomb,
    LennardJones,
}

/// Command-line values that replace the corresponding config fields.
#[derive(Args, Default)]
struct Overrides {
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    d0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    hbar: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    dt: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t_start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t_end: Option<f64>,
    #[arg(long)]
    splitting: Option<Splitting>,
    #[arg(long, allow_hyphen_values = true)]
    p0: Option<f64>,
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    x_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    x_max: Option<f64>,
    #[arg(long)]
    frame_stride: Option<usize>,
    #[arg(long)]
    statistics: Option<Stats>,
    #[arg(long)]
    interaction: Option<Shape>,
    #[arg(long, allow_hyphen_values = true)]
    v0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    sigma_z: Option<f64>,
    #[arg(long)]
    s_points: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    s_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    s_max: Option<f64>,
    /// Sweep points (per family for universality).
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    abscissa_max: Option<f64>,
}

impl Overrides {
    fn apply(&self, cfg: &mut RunConfig) {
        fn set<T: Copy>(slot: &mut T, v: Option<T>) {
            if let Some(v) = v {
                *slot = v;
            }
        }
        if let Some(dir) = &self.output_dir {
            cfg.output_dir = dir.clone();
        }
        set(&mut cfg.channel.omega, self.omega);
        set(&mut cfg.channel.d0, self.d0);
        set(&mut cfg.channel.eta, self.eta);
        let n = &mut cfg.numerics;
        set(&mut n.hbar, self.hbar);
        set(&mut n.dt, self.dt);
        set(&mut n.t_start, self.t_start);
        set(&mut n.t_end, self.t_end);
        set(&mut n.p0, self.p0);
        set(&mut n.grid_points, self.grid_points);
        set(&mut n.x_min, self.x_min);
        set(&mut n.x_max, self.x_max);
        set(&mut n.frame_stride, self.frame_stride);
        if let Some(s) = self.splitting {
            n.splitting = match s {
                Splitting::Lie => SplittingOrder::Lie,
                Splitting::Strang => SplittingOrder::Strang,
            };
        }
        if let Some(s) = self.statistics {
            cfg.pair.statistics = match s {
                Stats::Boson => Statistics::Boson,
                Stats::Fermion => Statistics::Fermion,
            };
        }
        match self.interaction {
            Some(Shape::None) => cfg.interaction = None,
            Some(Shape::Coulomb) => {
                let cur = cfg.interaction.unwrap_or(InteractionParams::coulomb(50.0, 1.0));
                cfg.interaction = Some(InteractionParams::coulomb(cur.v0, cur.epsilon));
            }
            Some(Shape::LennardJones) => {
                let cur = cfg.interaction.unwrap_or(InteractionParams::lennard_jones(50.0, 0.2, 0.25));
                cfg.interaction = Some(InteractionParams::lennard_jones(cur.v0, cur.epsilon, cur.b.unwrap_or(0.25)));
            }
            None => {}
        }
        if self.v0.is_some() || self.epsilon.is_some() || self.b.is_some() {
            let i = cfg.interaction.get_or_insert(InteractionParams::coulomb(50.0, 1.0));
            set(&mut i.v0, self.v0);
            set(&mut i.epsilon, self.epsilon);
            if self.b.is_some() {
                i.b = self.b;
                if i.kind == InteractionShape::Coulomb {
                    i.kind = InteractionShape::LennardJones;
                }
            }
        }
        set(&mut cfg.plane.sigma_z, self.sigma_z);
        set(&mut cfg.plane.s_points, self.s_points);
        set(&mut cfg.plane.s_min, self.s_min);
        set(&mut cfg.plane.s_max, self.s_max);
        set(&mut cfg.sweep.points, self.points);
        set(&mut cfg.sweep.abscissa_max, self.abscissa_max);
    }
}

fn load_target(target: &str) -> Result<RunConfig> {
    let path = Path::new(target);
    if target.ends_with(".toml") || path.is_file() {
        return RunConfig::load(path).with_context(|| format!("reading {target}"));
    }
    Ok(Recipe::from_name(target)?.default_config())
}

fn report(checks: &[Check]) -> bool {
    for c in checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        println!("{tag}  {}  ({})", c.name, c.detail);
    }
    checks.iter().all(|c| c.passed)
}

fn run_config(cfg: &RunConfig) -> Result<bool> {
    let bundle = run_experiment(cfg)?;
    println!("{}: {} files in {}", cfg.experiment, bundle.files.len(), bundle.dir.display());
    Ok(report(&bundle.checks))
}

fn run_recipe(recipe: Recipe, overrides: &Overrides) -> Result<bool> {
    let mut cfg = recipe.default_config();
    overrides.apply(&mut cfg);
    run_config(&cfg)
}

fn units(a: &UnitsArgs) -> Result<bool> {
    let u = match a.time {
        Some(t) => ScaledUnits::new(a.length, t, a.mass)?,
        None => ScaledUnits::with_hbar_eff(a.length, a.mass, a.hbar_eff)?,
    };
    println!("{:<24} {:>14} {:>14}  unit", "quantity", "scaled", "SI");
    for (name, scaled, si, unit) in u.conversion_table(a.omega, a.pz) {
        println!("{name:<24} {scaled:>14.6e} {si:>14.6e}  {unit}");
    }
    Ok(true)
}

fn analytic(ratio_max: f64, points: usize) -> Result<bool> {
    let boson = beamsplitter_statistics(Statistics::Boson);
    let fermion = beamsplitter_statistics(Statistics::Fermion);
    println!("splitter  both_in_a  both_in_b  one_each");
    for (name, d) in [("boson", boson), ("fermion", fermion)] {
        println!("{name:<9} {:>9.6} {:>10.6} {:>9.6}", d.both_in_a, d.both_in_b, d.one_each);
    }
    println!();
    println!("abscissa,P_same");
    let n = points.max(2);
    for k in 0..n {
        let a = ratio_max * k as f64 / (n - 1) as f64;
        println!("{a:.6},{:.9}", analytic_same_channel_probability(a));
    }
    let node = analytic_same_channel_probability(3f64.sqrt());
    let checks = [
        Check::new("bosons never exit one in each port", boson.one_each < 1e-12, format!("{:.2e}", boson.one_each)),
        Check::new("fermions always exit one in each port", (fermion.one_each - 1.0).abs() < 1e-12, format!("{:.6}", fermion.one_each)),
        Check::new("P_same vanishes at sqrt(3)", node < 1e-12, format!("{node:.2e}")),
    ];
    println!();
    Ok(report(&checks))
}

fn compare(max_discrepancy: f64, overrides: &Overrides) -> Result<bool> {
    let mut cfg = Recipe::Fig4.default_config();
    cfg.numerics.frame_stride = 0;
    overrides.apply(&mut cfg);
    cfg.validate()?;
    let (x, s) = cfg.plane_grids()?;
    let mut pcfg = cfg.propagation();
    pcfg.frame_stride = 0;
    let c = compare_2d_paraxial(&cfg.channel()?, x, s, cfg.plane.sigma_z, &cfg.paraxial(), &pcfg)?;
    println!("            P_left     P_right");
    println!("2D        {:>9.6}  {:>9.6}", c.two_d.left, c.two_d.right);
    println!("paraxial  {:>9.6}  {:>9.6}", c.paraxial.left, c.paraxial.right);
    let checks = [
        Check::new(
            "2D and paraxial exits agree",
            c.discrepancy < max_discrepancy,
            format!("discrepancy {:.4} (limit {max_discrepancy})", c.discrepancy),
        ),
        Check::new("no backscattering (< 1e-3)", c.backscattered < 1e-3, format!("{:.2e}", c.backscattered)),
    ];
    Ok(report(&checks))
}

fn execute(cli: Cli) -> Result<bool> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("setting up the worker pool")?;
    }
    match cli.command {
        Command::Units(a) => units(&a),
        Command::Run {
            target,
            print_config,
            overrides,
        } => {
            let mut cfg = load_target(&target)?;
            overrides.apply(&mut cfg);
            if print_config {
                cfg.validate()?;
                print!("{}", cfg.emit());
                return Ok(true);
            }
            run_config(&cfg)
        }
        Command::Sweep(o) => run_recipe(Recipe::Fig12, &o),
        Command::Tunneling(o) => run_recipe(Recipe::Fig7, &o),
        Command::Universality(o) => run_recipe(Recipe::Fig13, &o),
        Command::Analytic { ratio_max, points } => analytic(ratio_max, points),
        Command::CompareParaxial {
            max_discrepancy,
            overrides,
        } => compare(max_discrepancy, &overrides),
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
