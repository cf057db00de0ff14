use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::grid::{gaussian_packet, Grid1D, LeftRight};
use crate::potential::ChannelPotential;
use crate::propagator::{comoving_packet, propagate_2d, propagate_paraxial, Comoving2dRun, ParaxialConfig, PropagationConfig};

/// Least-squares line `y = slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n: usize,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    let n = x.len().min(y.len());
    if n < 2 {
        return None;
    }
    let mx = x[..n].iter().sum::<f64>() / n as f64;
    let my = y[..n].iter().sum::<f64>() / n as f64;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(LinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
        n,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TunnelingPoint {
    pub d0: f64,
    pub d0_sq: f64,
    /// Final probability in the valley the particle did not enter.
    pub transmission: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TunnelingCurve {
    pub points: Vec<TunnelingPoint>,
    /// Fit of `log T` against `d0²` over `fit_range`.
    pub fit: Option<LinearFit>,
    pub fit_range: (f64, f64),
}

impl TunnelingCurve {
    /// `κ'` of `log T ≈ -κ' d0² + const`.
    pub fn kappa_prime(&self) -> Option<f64> {
        self.fit.map(|f| -f.slope)
    }
}

/// Single-particle transmission for one minimum separation. The packet
/// enters in the right channel.
pub fn transmission(
    channel: &ChannelPotential,
    grid: Grid1D,
    par: &ParaxialConfig,
    cfg: &PropagationConfig,
) -> Result<f64> {
    let psi = gaussian_packet(grid, channel.asymptotic_center(), channel.omega(), cfg.hbar, None)?;
    let run = propagate_paraxial(&psi, channel, None, par, cfg)?;
    Ok(run.final_sample().first)
}

/// Transmission for each `d0`, plus the `log T` fit over `fit_range` in `d0²`.
pub fn tunneling_curve(
    d0_values: &[f64],
    template: &ChannelPotential,
    grid: Grid1D,
    par: &ParaxialConfig,
    cfg: &PropagationConfig,
    fit_range: (f64, f64),
) -> TunnelingCurve {
    let mut points: Vec<TunnelingPoint> = d0_values
        .par_iter()
        .map(|&d0| {
            let outcome = template
                .with_d0(d0)
                .and_then(|ch| transmission(&ch, grid, par, cfg));
            let (transmission, error) = match outcome {
                Ok(t) => (t, None),
                Err(e) => (f64::NAN, Some(e.to_string())),
            };
            TunnelingPoint {
                d0,
                d0_sq: d0 * d0,
                transmission,
                error,
            }
        })
        .collect();
    points.sort_by(|a, b| a.d0.total_cmp(&b.d0));
    let (xs, ys): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter(|p| {
            p.error.is_none()
                && p.transmission > 0.0
                && p.d0_sq >= fit_range.0 - 1e-12
                && p.d0_sq <= fit_range.1 + 1e-12
        })
        .map(|p| (p.d0_sq, p.transmission.ln()))
        .unzip();
    TunnelingCurve {
        fit: linear_fit(&xs, &ys),
        points,
        fit_range,
    }
}

/// `n` evenly spaced `d0²` values mapped back to `d0`.
pub fn d0_from_squares(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let s = if n == 1 { lo } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 };
            s.sqrt()
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct ParaxialComparison {
    pub two_d: LeftRight,
    pub paraxial: LeftRight,
    /// `max(|ΔP_left|, |ΔP_right|)` at exit.
    pub discrepancy: f64,
    pub backscattered: f64,
    pub run_2d: Comoving2dRun,
}

/// Runs the same single-particle passage with the full `(x, ς)` equation
/// and with the paraxial sweep, and compares the exit probabilities.
pub fn compare_2d_paraxial(
    channel: &ChannelPotential,
    x: Grid1D,
    s: Grid1D,
    sigma_z: f64,
    par: &ParaxialConfig,
    cfg: &PropagationConfig,
) -> Result<ParaxialComparison> {
    let initial = comoving_packet(channel, x, s, cfg.hbar, sigma_z)?;
    let run_2d = propagate_2d(&initial, channel, par, cfg)?;
    let psi = gaussian_packet(x, channel.asymptotic_center(), channel.omega(), cfg.hbar, None)?;
    let last = propagate_paraxial(&psi, channel, None, par, cfg)?.final_sample();
    let paraxial = LeftRight {
        left: last.first,
        right: last.second,
    };
    let two_d = run_2d.exit;
    let discrepancy = (two_d.left - paraxial.left)
        .abs()
        .max((two_d.right - paraxial.right).abs());
    Ok(ParaxialComparison {
        two_d,
        paraxial,
        discrepancy,
        backscattered: run_2d.backscattered,
        run_2d,
    })
}
