use crate::error::{Result, ShearletError};
use crate::grid::ImageGrid;

/// Side of the square SSIM window.
pub const SSIM_WINDOW: usize = 8;

const PEAK: f64 = 255.0;

/// Peak signal-to-noise ratio `20 log10(255 sqrt(N) / |f - g|)` in dB;
/// `+inf` for identical images.
pub fn psnr(f: &ImageGrid, g: &ImageGrid) -> Result<f64> {
    f.check_same_shape(g)?;
    let err: f64 = f
        .data()
        .iter()
        .zip(g.data())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    if err == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(20.0 * (PEAK * (f.len() as f64).sqrt() / err).log10())
}

/// Summed-area table with a zero first row and column.
fn integral(rows: usize, cols: usize, v: impl Fn(usize) -> f64) -> Vec<f64> {
    let w = cols + 1;
    let mut t = vec![0.0; (rows + 1) * w];
    for r in 0..rows {
        let mut run = 0.0;
        for c in 0..cols {
            run += v(r * cols + c);
            t[(r + 1) * w + c + 1] = t[r * w + c + 1] + run;
        }
    }
    t
}

/// Mean SSIM over all 8x8 windows at stride 1, with
/// `C1 = (0.01*255)^2` and `C2 = (0.03*255)^2`.
pub fn ssim(f: &ImageGrid, g: &ImageGrid) -> Result<f64> {
    f.check_same_shape(g)?;
    let (rows, cols) = f.shape();
    if rows < SSIM_WINDOW || cols < SSIM_WINDOW {
        return Err(ShearletError::arg(format!(
            "SSIM needs at least {SSIM_WINDOW}x{SSIM_WINDOW} pixels, got {rows}x{cols}"
        )));
    }
    let (x, y) = (f.data(), g.data());
    let sx = integral(rows, cols, |i| x[i]);
    let sy = integral(rows, cols, |i| y[i]);
    let sxx = integral(rows, cols, |i| x[i] * x[i]);
    let syy = integral(rows, cols, |i| y[i] * y[i]);
    let sxy = integral(rows, cols, |i| x[i] * y[i]);

    let c1 = (0.01 * PEAK) * (0.01 * PEAK);
    let c2 = (0.03 * PEAK) * (0.03 * PEAK);
    let n = (SSIM_WINDOW * SSIM_WINDOW) as f64;
    let w = cols + 1;
    let window = |t: &[f64], r: usize, c: usize| {
        let (r1, c1) = (r + SSIM_WINDOW, c + SSIM_WINDOW);
        (t[r1 * w + c1] - t[r * w + c1] - t[r1 * w + c] + t[r * w + c]) / n
    };

    let mut total = 0.0;
    let mut count = 0usize;
    for r in 0..=rows - SSIM_WINDOW {
        for c in 0..=cols - SSIM_WINDOW {
            let (mx, my) = (window(&sx, r, c), window(&sy, r, c));
            let vx = window(&sxx, r, c) - mx * mx;
            let vy = window(&syy, r, c) - my * my;
            let cov = window(&sxy, r, c) - mx * my;
            let num = (2.0 * mx * my + c1) * (2.0 * cov + c2);
            let den = (mx * mx + my * my + c1) * (vx + vy + c2);
            total += num / den;
            count += 1;
        }
    }
    Ok(total / count as f64)
}
