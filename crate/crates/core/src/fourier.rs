//! 2D discrete Fourier transform, centered-spectrum shifts and periodic
//! frequency-domain convolution.
//!
//! The forward transform is unnormalized; the inverse carries the
//! `1/(rows*cols)` factor. Any grid size is accepted. Row and column passes
//! run in parallel, one FFT per line, so results do not depend on the number
//! of worker threads.

use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Result, ShearletError};
use crate::grid::{ComplexGrid, Grid, ImageGrid};

/// Reusable forward/inverse plans for one grid shape.
#[derive(Clone)]
pub struct Fft2dPlan {
    rows: usize,
    cols: usize,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
}

impl Fft2dPlan {
    pub fn new(rows: usize, cols: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            rows,
            cols,
            row_fwd: planner.plan_fft_forward(cols),
            row_inv: planner.plan_fft_inverse(cols),
            col_fwd: planner.plan_fft_forward(rows),
            col_inv: planner.plan_fft_inverse(rows),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Unnormalized forward DFT, in place.
    pub fn forward(&self, g: &mut ComplexGrid) {
        self.run(g, &self.row_fwd, &self.col_fwd);
    }

    /// Inverse DFT including the `1/(rows*cols)` factor, in place.
    pub fn inverse(&self, g: &mut ComplexGrid) {
        self.run(g, &self.row_inv, &self.col_inv);
        let scale = 1.0 / (self.rows * self.cols) as f64;
        g.data_mut().iter_mut().for_each(|z| *z *= scale);
    }

    fn run(&self, g: &mut ComplexGrid, row_fft: &Arc<dyn Fft<f64>>, col_fft: &Arc<dyn Fft<f64>>) {
        assert_eq!(g.shape(), (self.rows, self.cols), "plan/grid shape mismatch");
        lines(g.data_mut(), self.cols, row_fft);
        if self.rows > 1 {
            let mut t = g.transpose();
            lines(t.data_mut(), self.rows, col_fft);
            *g = t.transpose();
        }
    }
}

fn lines(data: &mut [Complex64], len: usize, fft: &Arc<dyn Fft<f64>>) {
    if len == 1 {
        return;
    }
    let scratch_len = fft.get_inplace_scratch_len();
    data.par_chunks_mut(len).for_each_init(
        || vec![Complex64::default(); scratch_len],
        |scratch, line| fft.process_with_scratch(line, scratch),
    );
}

/// Unnormalized forward 2D DFT.
pub fn fft2d(g: &ComplexGrid) -> ComplexGrid {
    let mut out = g.clone();
    Fft2dPlan::new(g.rows(), g.cols()).forward(&mut out);
    out
}

/// Inverse 2D DFT, normalized by `1/(rows*cols)`.
pub fn ifft2d(g: &ComplexGrid) -> ComplexGrid {
    let mut out = g.clone();
    Fft2dPlan::new(g.rows(), g.cols()).inverse(&mut out);
    out
}

/// Rotation offset that brings index `(n+1)/2` to the front.
#[inline]
pub fn fftshift_offset(n: usize) -> usize {
    (n + 1) / 2
}

/// Rotation offset of the inverse shift, `n - (n+1)/2`.
#[inline]
pub fn ifftshift_offset(n: usize) -> usize {
    n - (n + 1) / 2
}

fn rotate_axes<T: Clone + Default>(
    g: &Grid<T>,
    axes: &[usize],
    offset: fn(usize) -> usize,
) -> Result<Grid<T>> {
    if let Some(&bad) = axes.iter().find(|&&a| a > 1) {
        return Err(ShearletError::arg(format!(
            "axis {bad} out of range for a 2D grid (valid: 0, 1)"
        )));
    }
    let (rows, cols) = g.shape();
    let dr = if axes.contains(&0) { offset(rows) } else { 0 };
    let dc = if axes.contains(&1) { offset(cols) } else { 0 };
    let mut data = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let src = g.row((r + dr) % rows);
        data.extend_from_slice(&src[dc..]);
        data.extend_from_slice(&src[..dc]);
    }
    Ok(Grid::from_vec(rows, cols, data).expect("same shape"))
}

/// Circularly rotates the chosen axes so that old index `(n+1)/2` becomes
/// index 0 (zero frequency moves to the center).
pub fn fftshift<T: Clone + Default>(g: &Grid<T>, axes: &[usize]) -> Result<Grid<T>> {
    rotate_axes(g, axes, fftshift_offset)
}

/// Inverse of [`fftshift`]; identical to it on even-length axes.
pub fn ifftshift<T: Clone + Default>(g: &Grid<T>, axes: &[usize]) -> Result<Grid<T>> {
    rotate_axes(g, axes, ifftshift_offset)
}

/// [`fftshift`] over both axes.
pub fn fftshift2<T: Clone + Default>(g: &Grid<T>) -> Grid<T> {
    rotate_axes(g, &[0, 1], fftshift_offset).expect("axes are valid")
}

/// [`ifftshift`] over both axes.
pub fn ifftshift2<T: Clone + Default>(g: &Grid<T>) -> Grid<T> {
    rotate_axes(g, &[0, 1], ifftshift_offset).expect("axes are valid")
}

/// 1D [`fftshift`].
pub fn fftshift_1d<T: Clone>(x: &[T]) -> Vec<T> {
    let p = fftshift_offset(x.len());
    x[p..].iter().chain(&x[..p]).cloned().collect()
}

/// 1D [`ifftshift`].
pub fn ifftshift_1d<T: Clone>(x: &[T]) -> Vec<T> {
    let p = ifftshift_offset(x.len());
    x[p..].iter().chain(&x[..p]).cloned().collect()
}

/// Centered spectrum of a centered spatial grid: `fftshift(fft(ifftshift(g)))`.
pub fn centered_fft(plan: &Fft2dPlan, g: &ComplexGrid) -> ComplexGrid {
    let mut x = ifftshift2(g);
    plan.forward(&mut x);
    fftshift2(&x)
}

/// Centered spatial grid from a centered spectrum: `fftshift(ifft(ifftshift(g)))`.
pub fn centered_ifft(plan: &Fft2dPlan, g: &ComplexGrid) -> ComplexGrid {
    let mut x = ifftshift2(g);
    plan.inverse(&mut x);
    fftshift2(&x)
}

/// Periodic convolution of `f` with the spatial filter whose centered
/// spectrum is `g_centered`.
pub fn freq_convolve(f: &ImageGrid, g_centered: &ComplexGrid) -> Result<ComplexGrid> {
    f.check_same_shape(g_centered)?;
    let plan = Fft2dPlan::new(f.rows(), f.cols());
    let spectrum = centered_fft(&plan, &f.to_complex()).mul(g_centered);
    Ok(centered_ifft(&plan, &spectrum))
}
