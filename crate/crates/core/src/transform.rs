//! Shearlet analysis, dual-frame synthesis, and the adjoint of analysis.
//!
//! Analysis correlates the image with every filter (spectrum times the
//! conjugate filter). Synthesis sums the coefficient spectra times the filters
//! and divides by the dual-frame weights; the adjoint skips that division.

use rayon::prelude::*;

use crate::error::{Result, ShearletError};
use crate::filters::ShearletSystem2D;
use crate::fourier::{centered_fft, centered_ifft, Fft2dPlan};
use crate::grid::{ComplexGrid, ImageGrid};

/// Slices summed sequentially per task; partial sums are then added in
/// chunk order, so the result does not depend on the thread count.
const CHUNK: usize = 4;

/// Shearlet coefficients, one full-size real slice per filter.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientStack {
    rows: usize,
    cols: usize,
    n_shearlets: usize,
    data: Vec<f64>,
    system_id: u64,
}

impl CoefficientStack {
    pub fn zeros(rows: usize, cols: usize, n_shearlets: usize, system_id: u64) -> Self {
        Self {
            rows,
            cols,
            n_shearlets,
            data: vec![0.0; rows * cols * n_shearlets],
            system_id,
        }
    }

    /// Zero stack shaped for `sys`.
    pub fn zeros_for(sys: &ShearletSystem2D) -> Self {
        Self::zeros(sys.rows(), sys.cols(), sys.n_shearlets(), sys.system_id())
    }

    pub fn from_vec(
        rows: usize,
        cols: usize,
        n_shearlets: usize,
        data: Vec<f64>,
        system_id: u64,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 || n_shearlets == 0 {
            return Err(ShearletError::arg("coefficient stack dimensions must be positive"));
        }
        if data.len() != rows * cols * n_shearlets {
            return Err(ShearletError::arg(format!(
                "stack {rows}x{cols}x{n_shearlets} needs {} values, got {}",
                rows * cols * n_shearlets,
                data.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            n_shearlets,
            data,
            system_id,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn n_shearlets(&self) -> usize {
        self.n_shearlets
    }

    pub fn system_id(&self) -> u64 {
        self.system_id
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn slice(&self, i: usize) -> &[f64] {
        let n = self.rows * self.cols;
        &self.data[i * n..(i + 1) * n]
    }

    pub fn slice_mut(&mut self, i: usize) -> &mut [f64] {
        let n = self.rows * self.cols;
        &mut self.data[i * n..(i + 1) * n]
    }

    pub fn slice_grid(&self, i: usize) -> ImageGrid {
        ImageGrid::from_vec(self.rows, self.cols, self.slice(i).to_vec()).expect("slice shape")
    }

    /// Iterator over slices in filter order.
    pub fn slices(&self) -> std::slice::Chunks<'_, f64> {
        self.data.chunks(self.rows * self.cols)
    }

    pub fn slices_mut(&mut self) -> std::slice::ChunksMut<'_, f64> {
        let n = self.rows * self.cols;
        self.data.chunks_mut(n)
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &CoefficientStack) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    fn check_bound(&self, sys: &ShearletSystem2D) -> Result<()> {
        if self.system_id != sys.system_id() {
            return Err(ShearletError::SystemMismatch {
                expected: sys.system_id(),
                found: self.system_id,
            });
        }
        if (self.rows, self.cols) != sys.shape() {
            return Err(ShearletError::ShapeMismatch {
                expected_rows: sys.rows(),
                expected_cols: sys.cols(),
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.n_shearlets != sys.n_shearlets() {
            return Err(ShearletError::arg(format!(
                "stack has {} slices, system has {} filters",
                self.n_shearlets,
                sys.n_shearlets()
            )));
        }
        Ok(())
    }
}

fn check_image(f: &ImageGrid, sys: &ShearletSystem2D) -> Result<()> {
    if f.shape() != sys.shape() {
        return Err(ShearletError::ShapeMismatch {
            expected_rows: sys.rows(),
            expected_cols: sys.cols(),
            rows: f.rows(),
            cols: f.cols(),
        });
    }
    Ok(())
}

/// Shearlet decomposition. Also returns, per slice, the imaginary residue
/// `|Im| / |slice|` discarded when storing real coefficients.
pub fn sheardec2d_with_residue(
    f: &ImageGrid,
    sys: &ShearletSystem2D,
) -> Result<(CoefficientStack, Vec<f64>)> {
    check_image(f, sys)?;
    let plan = Fft2dPlan::new(sys.rows(), sys.cols());
    let spectrum = centered_fft(&plan, &f.to_complex());
    let mut out = CoefficientStack::zeros_for(sys);
    let residues = out
        .data
        .par_chunks_mut(sys.rows() * sys.cols())
        .zip(sys.filters())
        .map(|(slice, psi)| {
            let mut prod = spectrum.clone();
            for (z, p) in prod.data_mut().iter_mut().zip(psi.data()) {
                *z *= p.conj();
            }
            let x = centered_ifft(&plan, &prod);
            let (mut re2, mut im2) = (0.0, 0.0);
            for (o, z) in slice.iter_mut().zip(x.data()) {
                *o = z.re;
                re2 += z.re * z.re;
                im2 += z.im * z.im;
            }
            if re2 > 0.0 {
                (im2 / re2).sqrt()
            } else {
                im2.sqrt()
            }
        })
        .collect();
    Ok((out, residues))
}

/// Shearlet decomposition: slice `i` is the periodic correlation of `f`
/// with filter `i`.
pub fn sheardec2d(f: &ImageGrid, sys: &ShearletSystem2D) -> Result<CoefficientStack> {
    sheardec2d_with_residue(f, sys).map(|(c, _)| c)
}

/// `sum_i fft(c_i) * psi_i` with a fixed summation order.
fn synthesis_spectrum(c: &CoefficientStack, sys: &ShearletSystem2D, plan: &Fft2dPlan) -> ComplexGrid {
    let (rows, cols) = sys.shape();
    let n = rows * cols;
    let partials: Vec<ComplexGrid> = (0..c.n_shearlets)
        .collect::<Vec<_>>()
        .par_chunks(CHUNK)
        .map(|ids| {
            let mut acc = ComplexGrid::zeros(rows, cols);
            for &i in ids {
                let slice = &c.data[i * n..(i + 1) * n];
                if slice.iter().all(|&v| v == 0.0) {
                    continue;
                }
                let grid = ImageGrid::from_vec(rows, cols, slice.to_vec()).expect("slice shape");
                let spec = centered_fft(plan, &grid.to_complex());
                for ((a, s), p) in acc.data_mut().iter_mut().zip(spec.data()).zip(sys.filters()[i].data()) {
                    *a += s * p;
                }
            }
            acc
        })
        .collect();
    let mut total = ComplexGrid::zeros(rows, cols);
    for p in &partials {
        for (t, v) in total.data_mut().iter_mut().zip(p.data()) {
            *t += v;
        }
    }
    total
}

/// Dual-frame reconstruction; exact inverse of [`sheardec2d`].
pub fn shearrec2d(c: &CoefficientStack, sys: &ShearletSystem2D) -> Result<ImageGrid> {
    c.check_bound(sys)?;
    let plan = Fft2dPlan::new(sys.rows(), sys.cols());
    let mut spec = synthesis_spectrum(c, sys, &plan);
    for (z, w) in spec.data_mut().iter_mut().zip(sys.dual_frame_weights().data()) {
        *z /= w;
    }
    Ok(centered_ifft(&plan, &spec).re())
}

/// Adjoint of [`sheardec2d`]: `sum_i c_i * psi_i` (convolution).
pub fn shear_adjoint(c: &CoefficientStack, sys: &ShearletSystem2D) -> Result<ImageGrid> {
    c.check_bound(sys)?;
    let plan = Fft2dPlan::new(sys.rows(), sys.cols());
    let spec = synthesis_spectrum(c, sys, &plan);
    Ok(centered_ifft(&plan, &spec).re())
}
