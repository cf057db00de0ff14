//! Run configuration, figure recipes and artifact output.

pub mod analysis;
pub mod config;
pub mod output;
pub mod recipes;

use std::path::PathBuf;

use serde::Serialize;

use crate::error::Result;

pub use analysis::{compare_2d_paraxial, linear_fit, tunneling_curve, LinearFit, ParaxialComparison, TunnelingCurve};
pub use config::RunConfig;
pub use output::ArtifactWriter;
pub use recipes::{Check, Recipe};

/// Files written by one run plus the checks evaluated along the way.
#[derive(Debug, Clone)]
pub struct ArtifactBundle {
    pub dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub checks: Vec<Check>,
}

impl ArtifactBundle {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    experiment: &'a str,
    code_version: &'a str,
    all_passed: bool,
    files: Vec<String>,
    checks: &'a [Check],
}

/// Validates `cfg`, runs its recipe and writes `manifest.toml` next to the
/// outputs. The resolved configuration is stored as `config.toml`.
pub fn run_experiment(cfg: &RunConfig) -> Result<ArtifactBundle> {
    cfg.validate()?;
    let recipe = Recipe::from_name(&cfg.experiment)?;
    let mut out = ArtifactWriter::create(&cfg.output_dir)?;
    out.text("config.toml", &cfg.emit())?;
    let checks = recipes::run_recipe(recipe, cfg, &mut out)?;
    let files: Vec<String> = out.files().iter().map(|p| p.display().to_string()).collect();
    let manifest = Manifest {
        experiment: &cfg.experiment,
        code_version: env!("CARGO_PKG_VERSION"),
        all_passed: checks.iter().all(|c| c.passed),
        files,
        checks: &checks,
    };
    out.text("manifest.toml", &toml::to_string(&manifest)?)?;
    Ok(ArtifactBundle {
        dir: out.dir().to_path_buf(),
        files: out.files().to_vec(),
        checks,
    })
}
