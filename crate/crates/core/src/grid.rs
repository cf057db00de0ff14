//! Uniform periodic grids and complex wave fields living on them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{self, SpectralPlan};

/// Cells at each edge that count towards the boundary tail mass.
pub const TAIL_CELLS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    n_points: usize,
    x_min: f64,
    x_max: f64,
}

impl Grid1D {
    pub fn new(n_points: usize, x_min: f64, x_max: f64) -> Result<Self> {
        if n_points < 64 || !n_points.is_power_of_two() {
            return Err(Error::InvalidParameter {
                field: "n_points",
                reason: format!("must be a power of two >= 64, got {n_points}"),
            });
        }
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::InvalidParameter {
                field: "x_max",
                reason: format!("need finite x_max > x_min, got [{x_min}, {x_max}]"),
            });
        }
        Ok(Self {
            n_points,
            x_min,
            x_max,
        })
    }

    /// `[-8, 8)` with 256 points.
    pub fn transverse_default() -> Self {
        Self::new(256, -8.0, 8.0).expect("valid default grid")
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_points as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        spectral::wavenumbers(self.n_points, self.dx())
    }

    /// Index of `-x(i)` when the grid is symmetric about the origin.
    pub fn mirror_index(&self, i: usize) -> usize {
        (self.n_points - i) % self.n_points
    }

    /// True if `x_min == -x_max`, so that `mirror_index` is meaningful.
    pub fn is_symmetric(&self) -> bool {
        (self.x_min + self.x_max).abs() <= 1e-12 * self.x_max.abs()
    }

    /// Same extent, `factor` times as many points.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(self.n_points * factor, self.x_min, self.x_max)
    }

    /// Weight of cell `i` in the right half (`x > 0`). The cell at `x = 0` is
    /// split evenly so symmetric states give exactly equal halves.
    pub(crate) fn right_weight(&self, i: usize) -> f64 {
        let x = self.x(i);
        let tol = 1e-9 * self.dx();
        if x > tol {
            1.0
        } else if x < -tol {
            0.0
        } else {
            0.5
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Axes {
    Line(Grid1D),
    /// Row-major: the first grid indexes rows, the second columns.
    Plane(Grid1D, Grid1D),
}

impl Axes {
    pub fn rank(&self) -> usize {
        match self {
            Axes::Line(_) => 1,
            Axes::Plane(..) => 2,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            Axes::Line(g) => (1, g.len()),
            Axes::Plane(a, b) => (a.len(), b.len()),
        }
    }

    pub fn len(&self) -> usize {
        let (r, c) = self.shape();
        r * c
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_volume(&self) -> f64 {
        match self {
            Axes::Line(g) => g.dx(),
            Axes::Plane(a, b) => a.dx() * b.dx(),
        }
    }
}

/// Complex amplitudes on a 1D line or a 2D plane.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    axes: Axes,
    data: Vec<Complex64>,
    norm_tracking: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeftRight {
    pub left: f64,
    pub right: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrants {
    pub same: f64,
    pub different: f64,
}

impl WaveField {
    pub fn new(axes: Axes, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != axes.len() {
            return Err(Error::InvalidParameter {
                field: "amplitudes",
                reason: format!("expected {} values, got {}", axes.len(), data.len()),
            });
        }
        let mut field = Self {
            axes,
            data,
            norm_tracking: 0.0,
        };
        field.norm_tracking = field.norm();
        Ok(field)
    }

    pub fn from_fn_1d(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Self {
        let data = grid.points().into_iter().map(f).collect();
        Self::new(Axes::Line(grid), data).expect("length matches grid")
    }

    pub fn from_fn_2d(rows: Grid1D, cols: Grid1D, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let xs = rows.points();
        let ys = cols.points();
        let data = xs
            .iter()
            .flat_map(|&x| ys.iter().map(move |&y| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Self::new(Axes::Plane(rows, cols), data).expect("length matches grid")
    }

    /// `a(x1) b(x2)` on the plane spanned by the two line grids.
    pub fn outer(a: &WaveField, b: &WaveField) -> Result<Self> {
        let (ga, gb) = (a.line_grid()?, b.line_grid()?);
        let data = a
            .data
            .iter()
            .flat_map(|&u| b.data.iter().map(move |&v| u * v))
            .collect();
        Self::new(Axes::Plane(ga, gb), data)
    }

    pub fn axes(&self) -> &Axes {
        &self.axes
    }

    pub fn rank(&self) -> usize {
        self.axes.rank()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.data
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.data
    }

    pub fn line_grid(&self) -> Result<Grid1D> {
        match self.axes {
            Axes::Line(g) => Ok(g),
            Axes::Plane(..) => Err(Error::Dimension {
                expected: 1,
                found: 2,
            }),
        }
    }

    pub fn plane_grids(&self) -> Result<(Grid1D, Grid1D)> {
        match self.axes {
            Axes::Plane(a, b) => Ok((a, b)),
            Axes::Line(_) => Err(Error::Dimension {
                expected: 2,
                found: 1,
            }),
        }
    }

    /// Total probability `Σ|ψ|² ΔV`.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.axes.cell_volume()
    }

    /// Probability recorded at the last `normalize` or `track_norm` call.
    pub fn tracked_norm(&self) -> f64 {
        self.norm_tracking
    }

    pub fn track_norm(&mut self) -> f64 {
        self.norm_tracking = self.norm();
        self.norm_tracking
    }

    /// Rescales to unit probability; returns the norm beforehand.
    pub fn normalize(&mut self) -> f64 {
        let before = self.norm();
        if before > 0.0 {
            let s = 1.0 / before.sqrt();
            self.data.iter_mut().for_each(|c| *c *= s);
        }
        self.norm_tracking = self.norm();
        before
    }

    pub fn density(&self) -> Vec<f64> {
        self.data.iter().map(|c| c.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &WaveField) -> Complex64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * self.axes.cell_volume()
    }

    /// Largest `|ψ_a - ψ_b|` over the grid.
    pub fn max_difference(&self, other: &WaveField) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `sqrt(Σ|ψ_a - ψ_b|² ΔV)`.
    pub fn l2_distance(&self, other: &WaveField) -> f64 {
        (self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            * self.axes.cell_volume())
        .sqrt()
    }

    /// Probability within `TAIL_CELLS` of any edge.
    pub fn boundary_tail_mass(&self) -> f64 {
        let (rows, cols) = self.axes.shape();
        let near = |i: usize, n: usize| n > 1 && (i < TAIL_CELLS || i + TAIL_CELLS >= n);
        let mut mass = 0.0;
        for r in 0..rows {
            for c in 0..cols {
                if near(r, rows) || near(c, cols) {
                    mass += self.data[r * cols + c].norm_sqr();
                }
            }
        }
        mass * self.axes.cell_volume()
    }

    /// Largest `|ψ(x1,x2) - sign·ψ(x2,x1)|` on a square plane.
    pub fn exchange_defect(&self, sign: f64) -> Result<f64> {
        let (a, b) = self.plane_grids()?;
        if a != b {
            return Err(Error::InvalidParameter {
                field: "axes",
                reason: "exchange symmetry needs identical grids on both axes".into(),
            });
        }
        let n = a.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let d = self.data[i * n + j] - sign * self.data[j * n + i];
                worst = worst.max(d.norm());
            }
        }
        Ok(worst)
    }

    /// `ψ(-x)` on a symmetric line grid.
    pub fn mirrored(&self) -> Result<WaveField> {
        let g = self.line_grid()?;
        if !g.is_symmetric() {
            return Err(Error::InvalidParameter {
                field: "grid",
                reason: "mirror needs a grid symmetric about 0".into(),
            });
        }
        let data = (0..g.len()).map(|i| self.data[g.mirror_index(i)]).collect();
        WaveField::new(self.axes, data)
    }

    /// Mean coordinate along `axis` (0 = rows / the line, 1 = columns).
    pub fn mean_position(&self, axis: usize) -> f64 {
        self.position_moment(axis, 1) / self.norm()
    }

    pub fn position_variance(&self, axis: usize) -> f64 {
        let n = self.norm();
        let m1 = self.position_moment(axis, 1) / n;
        self.position_moment(axis, 2) / n - m1 * m1
    }

    fn position_moment(&self, axis: usize, power: i32) -> f64 {
        let (rows, cols) = self.axes.shape();
        let coord = |r: usize, c: usize| -> f64 {
            match (&self.axes, axis) {
                (Axes::Line(g), _) => g.x(c),
                (Axes::Plane(a, _), 0) => a.x(r),
                (Axes::Plane(_, b), _) => b.x(c),
            }
        };
        let mut acc = 0.0;
        for r in 0..rows {
            for c in 0..cols {
                acc += coord(r, c).powi(power) * self.data[r * cols + c].norm_sqr();
            }
        }
        acc * self.axes.cell_volume()
    }

    /// `p ψ = -iħ ∂ψ/∂x` via the spectral derivative, 1D only.
    pub fn momentum_applied(&self, hbar: f64) -> Result<Vec<Complex64>> {
        let g = self.line_grid()?;
        let k = g.wavenumbers();
        let n = g.len();
        let mut plan = SpectralPlan::new(1, n);
        let mut buf = self.data.clone();
        plan.forward(&mut buf);
        for (b, &kj) in buf.iter_mut().zip(&k) {
            *b *= hbar * kj / n as f64;
        }
        plan.inverse(&mut buf);
        Ok(buf)
    }

    pub fn momentum_mean(&self, hbar: f64) -> Result<f64> {
        let p = self.momentum_applied(hbar)?;
        Ok(self.braket(&p).re / self.norm())
    }

    pub fn momentum_variance(&self, hbar: f64) -> Result<f64> {
        let p = self.momentum_applied(hbar)?;
        let n = self.norm();
        let mean = self.braket(&p).re / n;
        let p2 = p.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.axes.cell_volume() / n;
        Ok(p2 - mean * mean)
    }

    /// `⟨xp + px⟩ = 2 Re⟨ψ|x p ψ⟩`, 1D only.
    pub fn symmetrized_xp(&self, hbar: f64) -> Result<f64> {
        let g = self.line_grid()?;
        let p = self.momentum_applied(hbar)?;
        let xp: Complex64 = self
            .data
            .iter()
            .zip(&p)
            .enumerate()
            .map(|(i, (a, b))| a.conj() * g.x(i) * b)
            .sum();
        Ok(2.0 * xp.re * g.dx())
    }

    /// `⟨[x, p]⟩`, which should equal `iħ` for well-resolved states.
    pub fn commutator_xp(&self, hbar: f64) -> Result<Complex64> {
        let g = self.line_grid()?;
        let p_psi = self.momentum_applied(hbar)?;
        let x_psi: Vec<Complex64> = self
            .data
            .iter()
            .enumerate()
            .map(|(i, a)| a * g.x(i))
            .collect();
        let p_x_psi = WaveField::new(self.axes, x_psi)?.momentum_applied(hbar)?;
        let x_p_psi: Vec<Complex64> = p_psi
            .iter()
            .enumerate()
            .map(|(i, b)| b * g.x(i))
            .collect();
        Ok((self.braket(&x_p_psi) - self.braket(&p_x_psi)) / self.norm())
    }

    /// Probability carried by wavenumbers below `k_threshold` along `axis`.
    pub fn mass_below_wavenumber(&self, axis: usize, k_threshold: f64) -> f64 {
        let (rows, cols) = self.axes.shape();
        let mut buf = self.data.clone();
        let mut plan = SpectralPlan::new(rows, cols);
        plan.forward(&mut buf);
        let (k_rows, k_cols) = match &self.axes {
            Axes::Line(g) => (vec![0.0], g.wavenumbers()),
            Axes::Plane(a, b) => (a.wavenumbers(), b.wavenumbers()),
        };
        let total: f64 = buf.iter().map(|c| c.norm_sqr()).sum();
        let mut below = 0.0;
        for r in 0..rows {
            for c in 0..cols {
                let k = if axis == 0 && rows > 1 { k_rows[r] } else { k_cols[c] };
                if k < k_threshold {
                    below += buf[r * cols + c].norm_sqr();
                }
            }
        }
        below / total * self.norm()
    }

    fn braket(&self, other: &[Complex64]) -> Complex64 {
        self.data
            .iter()
            .zip(other)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * self.axes.cell_volume()
    }
}

/// Normalized Gaussian `N exp[-(ω/2ħ)(x - c)²]` with an optional momentum
/// kick `exp(i p x/ħ)`. Its density has standard deviation `sqrt(ħ/(2ω))`.
pub fn gaussian_packet(
    grid: Grid1D,
    center: f64,
    omega: f64,
    hbar: f64,
    momentum: Option<f64>,
) -> Result<WaveField> {
    crate::error::check_positive("omega", omega)?;
    crate::error::check_positive("hbar", hbar)?;
    let sigma = (hbar / (2.0 * omega)).sqrt();
    let margin = 6.0 * sigma;
    if center - margin < grid.x_min() || center + margin > grid.x_max() {
        return Err(Error::PacketOutsideGrid(format!(
            "center {center} with 6σ = {margin:.4} leaves [{}, {}]",
            grid.x_min(),
            grid.x_max()
        )));
    }
    let p = momentum.unwrap_or(0.0);
    let mut field = WaveField::from_fn_1d(grid, |x| {
        let amp = (-(omega / (2.0 * hbar)) * (x - center).powi(2)).exp();
        Complex64::from_polar(amp, p * x / hbar)
    });
    field.normalize();
    Ok(field)
}

/// Probability in the left (`x < 0`) and right (`x > 0`) valleys.
pub fn probability_left_right(field: &WaveField) -> Result<LeftRight> {
    let g = field.line_grid()?;
    let mut right = 0.0;
    let mut left = 0.0;
    for (i, c) in field.amplitudes().iter().enumerate() {
        let w = g.right_weight(i);
        let m = c.norm_sqr();
        right += w * m;
        left += (1.0 - w) * m;
    }
    Ok(LeftRight {
        left: left * g.dx(),
        right: right * g.dx(),
    })
}

/// Probability that both coordinates share a sign (same channel) versus not.
pub fn quadrant_probabilities(field: &WaveField) -> Result<Quadrants> {
    let (a, b) = field.plane_grids()?;
    let wa: Vec<f64> = (0..a.len()).map(|i| a.right_weight(i)).collect();
    let wb: Vec<f64> = (0..b.len()).map(|j| b.right_weight(j)).collect();
    let cols = b.len();
    let mut same = 0.0;
    let mut different = 0.0;
    for (i, &ra) in wa.iter().enumerate() {
        let row = &field.amplitudes()[i * cols..(i + 1) * cols];
        for (c, &rb) in row.iter().zip(&wb) {
            let m = c.norm_sqr();
            let s = ra * rb + (1.0 - ra) * (1.0 - rb);
            same += s * m;
            different += (1.0 - s) * m;
        }
    }
    let dv = field.axes().cell_volume();
    Ok(Quadrants {
        same: same * dv,
        different: different * dv,
    })
}
