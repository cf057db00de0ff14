//! Python bindings. The `pyfunction`s are thin wrappers over the plain
//! functions below, which are usable (and tested) without an interpreter.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use groovesim::analytic::{self, Statistics};
use groovesim::grid::{gaussian_packet, Grid1D};
use groovesim::harness::{run_experiment, Recipe, RunConfig};
use groovesim::potential::ChannelPotential;
use groovesim::propagator::{propagate_paraxial, ParaxialConfig};
use groovesim::scaling::ScaledUnits;
use groovesim::spectrum::solve_double_well;

pub type Result<T> = groovesim::Result<T>;

/// `(E_S, E_A, Omega, 2 hbar Omega)` of the frozen double well at `z = 0`.
pub fn doublet(omega: f64, d0: f64, hbar: f64, n_points: usize, x_min: f64, x_max: f64) -> Result<(f64, f64, f64, f64)> {
    let ch = ChannelPotential::new(omega, d0, 30.0)?;
    let s = solve_double_well(&ch, &Grid1D::new(n_points, x_min, x_max)?, hbar, 2)?;
    Ok((s.e_s(), s.e_a(), s.omega_split(), s.two_hbar_omega()))
}

/// Final `(P_left, P_right)` of the paraxial single-particle run with the
/// packet entering on the right, at paper numerics otherwise.
pub fn paraxial_split(omega: f64, d0: f64, eta: f64, hbar: f64, p0: f64, dt: f64) -> Result<(f64, f64)> {
    let mut cfg = RunConfig::for_experiment("fig6");
    cfg.numerics.hbar = hbar;
    cfg.numerics.dt = dt;
    cfg.numerics.frame_stride = 0;
    let ch = ChannelPotential::new(omega, d0, eta)?;
    let grid = cfg.grid()?;
    let psi = gaussian_packet(grid, ch.asymptotic_center(), omega, hbar, None)?;
    let par = ParaxialConfig {
        p0,
        ..cfg.paraxial()
    };
    let last = propagate_paraxial(&psi, &ch, None, &par, &cfg.propagation())?.final_sample();
    Ok((last.first, last.second))
}

/// Runs a recipe (by name) or a TOML config text; returns whether all
/// checks passed and the `(name, passed, detail)` list.
pub fn run(target: &str, output_dir: Option<&str>) -> Result<(bool, Vec<(String, bool, String)>)> {
    let mut cfg = match Recipe::from_name(target) {
        Ok(r) => r.default_config(),
        Err(e) if !target.contains('=') => return Err(e),
        Err(_) => RunConfig::parse(target)?,
    };
    if let Some(dir) = output_dir {
        cfg.output_dir = dir.into();
    }
    let bundle = run_experiment(&cfg)?;
    let checks = bundle
        .checks
        .iter()
        .map(|c| (c.name.clone(), c.passed, c.detail.clone()))
        .collect();
    Ok((bundle.all_passed(), checks))
}

fn py_err(e: groovesim::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyfunction]
fn hbar_eff(length: f64, time: f64, mass: f64) -> PyResult<f64> {
    ScaledUnits::new(length, time, mass).map(|u| u.hbar_eff()).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (x, z, omega = 30.0, d0 = 1.8903, eta = 30.0))]
fn groove(x: f64, z: f64, omega: f64, d0: f64, eta: f64) -> PyResult<f64> {
    ChannelPotential::new(omega, d0, eta).map(|c| c.groove(x, z)).map_err(py_err)
}

#[pyfunction]
#[pyo3(name = "doublet", signature = (omega = 30.0, d0 = 1.8903, hbar = 6.0, n_points = 256, x_min = -8.0, x_max = 8.0))]
fn py_doublet(omega: f64, d0: f64, hbar: f64, n_points: usize, x_min: f64, x_max: f64) -> PyResult<(f64, f64, f64, f64)> {
    doublet(omega, d0, hbar, n_points, x_min, x_max).map_err(py_err)
}

#[pyfunction]
#[pyo3(name = "paraxial_split", signature = (omega = 30.0, d0 = 1.8903, eta = 30.0, hbar = 6.0, p0 = 30.0, dt = 0.001))]
fn py_paraxial_split(py: Python<'_>, omega: f64, d0: f64, eta: f64, hbar: f64, p0: f64, dt: f64) -> PyResult<(f64, f64)> {
    py.detach(|| paraxial_split(omega, d0, eta, hbar, p0, dt)).map_err(py_err)
}

#[pyfunction]
fn beamsplitter(statistics: &str) -> PyResult<(f64, f64, f64)> {
    let s = match statistics {
        "boson" => Statistics::Boson,
        "fermion" => Statistics::Fermion,
        other => return Err(PyValueError::new_err(format!("unknown statistics `{other}`"))),
    };
    let d = analytic::beamsplitter_statistics(s);
    Ok((d.both_in_a, d.both_in_b, d.one_each))
}

#[pyfunction]
fn same_channel_probability(ratio: f64) -> f64 {
    analytic::analytic_same_channel_probability(ratio)
}

#[pyfunction]
fn recipes() -> Vec<String> {
    Recipe::names()
}

#[pyfunction]
#[pyo3(name = "run", signature = (target, output_dir = None))]
fn py_run(py: Python<'_>, target: &str, output_dir: Option<&str>) -> PyResult<(bool, Vec<(String, bool, String)>)> {
    py.detach(|| run(target, output_dir)).map_err(py_err)
}

#[pymodule]
fn groovesim_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(hbar_eff, m)?)?;
    m.add_function(wrap_pyfunction!(groove, m)?)?;
    m.add_function(wrap_pyfunction!(py_doublet, m)?)?;
    m.add_function(wrap_pyfunction!(py_paraxial_split, m)?)?;
    m.add_function(wrap_pyfunction!(beamsplitter, m)?)?;
    m.add_function(wrap_pyfunction!(same_channel_probability, m)?)?;
    m.add_function(wrap_pyfunction!(recipes, m)?)?;
    m.add_function(wrap_pyfunction!(py_run, m)?)?;
    Ok(())
}
