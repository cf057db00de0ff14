//! Unnormalized 1D/2D discrete Fourier transforms over row-major buffers.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub(crate) struct SpectralPlan {
    rows: usize,
    cols: usize,
    fwd_cols: Arc<dyn Fft<f64>>,
    inv_cols: Arc<dyn Fft<f64>>,
    fwd_rows: Option<(Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>)>,
    scratch: Vec<Complex64>,
    transposed: Vec<Complex64>,
}

impl SpectralPlan {
    /// `rows == 1` gives a plain 1D transform of length `cols`.
    pub fn new(rows: usize, cols: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fwd_cols = planner.plan_fft_forward(cols);
        let inv_cols = planner.plan_fft_inverse(cols);
        let fwd_rows = (rows > 1).then(|| {
            (
                planner.plan_fft_forward(rows),
                planner.plan_fft_inverse(rows),
            )
        });
        let mut scratch_len = fwd_cols
            .get_inplace_scratch_len()
            .max(inv_cols.get_inplace_scratch_len());
        if let Some((f, i)) = &fwd_rows {
            scratch_len = scratch_len
                .max(f.get_inplace_scratch_len())
                .max(i.get_inplace_scratch_len());
        }
        Self {
            rows,
            cols,
            fwd_cols,
            inv_cols,
            fwd_rows,
            scratch: vec![Complex64::default(); scratch_len],
            transposed: if rows > 1 {
                vec![Complex64::default(); rows * cols]
            } else {
                Vec::new()
            },
        }
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn forward(&mut self, data: &mut [Complex64]) {
        self.run(data, false);
    }

    /// Inverse transform without the `1/N` factor.
    pub fn inverse(&mut self, data: &mut [Complex64]) {
        self.run(data, true);
    }

    /// `data ← IDFT(phase · DFT(data))`, unnormalized. For 2D plans `phase`
    /// is indexed in the transposed spectral layout `[col * rows + row]`,
    /// which saves the two transposes back and forth around the product.
    pub fn multiply_spectral(&mut self, data: &mut [Complex64], phase: &[Complex64]) {
        debug_assert_eq!(data.len(), self.len());
        debug_assert_eq!(phase.len(), self.len());
        self.fwd_cols.process_with_scratch(data, &mut self.scratch);
        match &self.fwd_rows {
            None => data.iter_mut().zip(phase).for_each(|(d, p)| *d *= p),
            Some((fwd, inv)) => {
                transpose(data, &mut self.transposed, self.rows, self.cols);
                fwd.process_with_scratch(&mut self.transposed, &mut self.scratch);
                self.transposed.iter_mut().zip(phase).for_each(|(d, p)| *d *= p);
                inv.process_with_scratch(&mut self.transposed, &mut self.scratch);
                transpose(&self.transposed, data, self.cols, self.rows);
            }
        }
        self.inv_cols.process_with_scratch(data, &mut self.scratch);
    }

    fn run(&mut self, data: &mut [Complex64], inverse: bool) {
        debug_assert_eq!(data.len(), self.len());
        let cols_fft = if inverse { &self.inv_cols } else { &self.fwd_cols };
        cols_fft.process_with_scratch(data, &mut self.scratch);
        if let Some((fwd, inv)) = &self.fwd_rows {
            let rows_fft = if inverse { inv } else { fwd };
            transpose(data, &mut self.transposed, self.rows, self.cols);
            rows_fft.process_with_scratch(&mut self.transposed, &mut self.scratch);
            transpose(&self.transposed, data, self.cols, self.rows);
        }
    }
}

/// Writes the transpose of the `rows x cols` matrix `src` into `dst`.
pub(crate) fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    const BLOCK: usize = 32;
    for rb in (0..rows).step_by(BLOCK) {
        for cb in (0..cols).step_by(BLOCK) {
            for r in rb..(rb + BLOCK).min(rows) {
                for c in cb..(cb + BLOCK).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}

/// Angular wavenumbers in standard DFT ordering for `n` points spaced `dx`.
pub(crate) fn wavenumbers(n: usize, dx: f64) -> Vec<f64> {
    let dk = 2.0 * std::f64::consts::PI / (n as f64 * dx);
    (0..n)
        .map(|j| {
            let m = if j < n.div_ceil(2) { j as f64 } else { j as f64 - n as f64 };
            m * dk
        })
        .collect()
}
