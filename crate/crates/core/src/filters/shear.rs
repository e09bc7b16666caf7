use rayon::prelude::*;

use super::{cascade_lowpass, Filter1D};
use crate::grid::ImageGrid;

/// Integer up/down factor `2^ceil(j/2)` used by the digital shear at scale `j`.
pub fn shear_factor(j: u32) -> usize {
    1 << j.div_ceil(2)
}

/// Digital shear of `f` by `k` at scale `j`, acting along the column (x1)
/// direction with the shift proportional to the row offset from the center
/// row `rows/2`.
///
/// With factor 1 this is the lattice shear `out(r, c) = f(r, c + k (r - rows/2))`.
/// Otherwise each row is upsampled by the factor, smoothed with the cascade
/// `h_{ceil(j/2)}`, shifted on the refined lattice, smoothed with the reversed
/// cascade, and downsampled. The factor is multiplied back so that a constant
/// row keeps its value. All boundaries are periodic.
pub fn digital_shear(f: &ImageGrid, k: i64, j: u32, h: &Filter1D) -> ImageGrid {
    let (rows, cols) = f.shape();
    let m = shear_factor(j);
    let rc = (rows / 2) as i64;
    let mut out = ImageGrid::zeros(rows, cols);

    if m == 1 {
        out.data_mut()
            .par_chunks_mut(cols)
            .enumerate()
            .for_each(|(r, line)| {
                let s = k * (r as i64 - rc);
                let src = f.row(r);
                for (c, v) in line.iter_mut().enumerate() {
                    *v = src[(c as i64 + s).rem_euclid(cols as i64) as usize];
                }
            });
        return out;
    }

    // Shifts commute with convolution, so both smoothings merge into one kernel.
    let hl = cascade_lowpass(h, j.div_ceil(2));
    let kernel: Vec<(i64, f64)> = hl.convolve(&hl.reversed()).positions().collect();
    let width = (cols * m) as i64;
    out.data_mut()
        .par_chunks_mut(cols)
        .enumerate()
        .for_each_init(
            || vec![0.0; cols * m],
            |fine, (r, line)| {
                fine.iter_mut().for_each(|v| *v = 0.0);
                for (q, &v) in f.row(r).iter().enumerate() {
                    if v == 0.0 {
                        continue;
                    }
                    let base = (q * m) as i64;
                    for &(p, w) in &kernel {
                        fine[(base + p).rem_euclid(width) as usize] += v * w;
                    }
                }
                let s = k * (r as i64 - rc);
                for (c, o) in line.iter_mut().enumerate() {
                    *o = m as f64 * fine[((c * m) as i64 + s).rem_euclid(width) as usize];
                }
            },
        );
    out
}
