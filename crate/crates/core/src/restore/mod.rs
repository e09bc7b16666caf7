//! Shearlet-domain restoration: hard-threshold denoising, iterative
//! thresholding inpainting, and the PSNR/SSIM quality metrics.

mod metrics;
mod noise;

use crate::error::{Result, ShearletError};
use crate::filters::ShearletSystem2D;
use crate::grid::ImageGrid;
use crate::transform::{sheardec2d, shearrec2d, CoefficientStack};

pub use metrics::{psnr, ssim, SSIM_WINDOW};
pub use noise::{add_gaussian_noise, gaussian_field};

/// Default per-scale multipliers: 2.5 everywhere, 3.8 at the finest scale.
pub fn default_k(n_scales: usize) -> Vec<f64> {
    (0..n_scales)
        .map(|j| if j + 1 == n_scales { 3.8 } else { 2.5 })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenoiseParams {
    /// Noise standard deviation in pixel units.
    pub sigma: f64,
    /// Threshold multiplier per scale, coarse to fine.
    pub k: Vec<f64>,
    /// Multiplier for the lowpass slice.
    pub lowpass_k: f64,
}

impl DenoiseParams {
    /// Default multipliers for `n_scales` scales.
    pub fn new(sigma: f64, n_scales: usize) -> Self {
        Self::with_k(sigma, default_k(n_scales))
    }

    /// Custom multipliers; the lowpass slice uses `k[0]`.
    pub fn with_k(sigma: f64, k: Vec<f64>) -> Self {
        let lowpass_k = k.first().copied().unwrap_or(2.5);
        Self { sigma, k, lowpass_k }
    }

    /// Per-slice thresholds `K_scale * sigma * rms_i`.
    pub fn thresholds(&self, sys: &ShearletSystem2D) -> Result<Vec<f64>> {
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return Err(ShearletError::arg(format!("sigma must be >= 0, got {}", self.sigma)));
        }
        if self.k.len() != sys.n_scales() {
            return Err(ShearletError::arg(format!(
                "need {} threshold multipliers, got {}",
                sys.n_scales(),
                self.k.len()
            )));
        }
        if self.k.iter().chain([&self.lowpass_k]).any(|&k| !(k > 0.0)) {
            return Err(ShearletError::arg("threshold multipliers must be positive"));
        }
        Ok(sys
            .indices()
            .iter()
            .zip(sys.rms())
            .map(|(idx, rms)| {
                let k = if idx.lowpass {
                    self.lowpass_k
                } else {
                    self.k[idx.scale as usize]
                };
                k * self.sigma * rms
            })
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InpaintParams {
    pub delta_init: f64,
    /// Ratio of the final to the initial threshold, in `(0, 1]`.
    pub delta_min: f64,
    pub iterations: usize,
}

impl InpaintParams {
    fn validate(&self) -> Result<()> {
        if !(self.delta_init > 0.0) || !self.delta_init.is_finite() {
            return Err(ShearletError::arg("delta_init must be positive"));
        }
        if !(self.delta_min > 0.0 && self.delta_min <= 1.0) {
            return Err(ShearletError::arg("delta_min must lie in (0, 1]"));
        }
        if self.iterations < 2 {
            return Err(ShearletError::arg("inpainting needs at least 2 iterations"));
        }
        Ok(())
    }

    /// Per-iteration decay `delta_min^(1/(iterations-1))`.
    pub fn decay(&self) -> f64 {
        self.delta_min.powf(1.0 / (self.iterations - 1) as f64)
    }

    /// Threshold used at iteration `t` (0-based).
    pub fn threshold_at(&self, t: usize) -> f64 {
        self.delta_init * self.decay().powi(t as i32)
    }
}

/// Zeroes every coefficient with `|x| < delta_i` in slice `i`.
pub fn hard_threshold(c: &CoefficientStack, delta: &[f64]) -> Result<CoefficientStack> {
    let mut out = c.clone();
    hard_threshold_in_place(&mut out, delta)?;
    Ok(out)
}

pub fn hard_threshold_in_place(c: &mut CoefficientStack, delta: &[f64]) -> Result<()> {
    if delta.len() != c.n_shearlets() {
        return Err(ShearletError::arg(format!(
            "need {} thresholds, got {}",
            c.n_shearlets(),
            delta.len()
        )));
    }
    if delta.iter().any(|d| !(*d >= 0.0)) {
        return Err(ShearletError::arg("thresholds must be non-negative"));
    }
    for (slice, &d) in c.slices_mut().zip(delta) {
        for v in slice {
            if !(v.abs() >= d) {
                *v = 0.0;
            }
        }
    }
    Ok(())
}

/// Decompose, hard-threshold slice `i` at `K_scale * sigma * rms_i`, reconstruct.
pub fn denoise(f_noisy: &ImageGrid, sys: &ShearletSystem2D, p: &DenoiseParams) -> Result<ImageGrid> {
    let delta = p.thresholds(sys)?;
    let mut c = sheardec2d(f_noisy, sys)?;
    hard_threshold_in_place(&mut c, &delta)?;
    shearrec2d(&c, sys)
}

/// Heuristic starting threshold: the largest RMS-normalized coefficient
/// magnitude of the masked image.
pub fn default_delta_init(f_masked: &ImageGrid, sys: &ShearletSystem2D) -> Result<f64> {
    let c = sheardec2d(f_masked, sys)?;
    Ok(c.slices()
        .zip(sys.rms())
        .map(|(s, r)| s.iter().fold(0.0f64, |m, v| m.max(v.abs())) / r)
        .fold(0.0, f64::max))
}

/// Iterative hard-thresholding inpainting. `mask` is 1 on known pixels and
/// 0 on missing ones. Thresholds are weighted by the filter RMS.
pub fn inpaint(
    f_masked: &ImageGrid,
    mask: &ImageGrid,
    sys: &ShearletSystem2D,
    p: &InpaintParams,
) -> Result<ImageGrid> {
    p.validate()?;
    f_masked.check_same_shape(mask)?;
    if mask.data().iter().any(|&m| m != 0.0 && m != 1.0) {
        return Err(ShearletError::arg("mask must contain only 0 and 1"));
    }
    let lambda = p.decay();
    let mut delta = p.delta_init;
    let mut f_inp = ImageGrid::zeros(f_masked.rows(), f_masked.cols());
    for _ in 0..p.iterations {
        let data = f_masked
            .data()
            .iter()
            .zip(mask.data())
            .zip(f_inp.data())
            .map(|((&y, &m), &x)| m * (y - x) + x)
            .collect();
        let merged = ImageGrid::from_vec(f_masked.rows(), f_masked.cols(), data)?;
        let mut c = sheardec2d(&merged, sys)?;
        let thresholds: Vec<f64> = sys.rms().iter().map(|r| delta * r).collect();
        hard_threshold_in_place(&mut c, &thresholds)?;
        f_inp = shearrec2d(&c, sys)?;
        delta *= lambda;
    }
    Ok(f_inp)
}
