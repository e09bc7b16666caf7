use rayon::prelude::*;

use crate::error::{Result, ShearletError};
use crate::grid::ImageGrid;

/// Angles per backprojection task; partial images are summed in task order.
const ANGLE_CHUNK: usize = 8;

/// Parallel-beam scan description. The image covers `[-1, 1]^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanGeometry {
    pub n_angles: usize,
    pub n_offsets: usize,
    /// Half detector span `S`; offsets cover `[-S, S]`.
    pub span: f64,
    pub image_size: usize,
}

impl ScanGeometry {
    pub fn new(n_angles: usize, n_offsets: usize, span: f64, image_size: usize) -> Result<Self> {
        if n_angles == 0 {
            return Err(ShearletError::arg("need at least one angle"));
        }
        if n_offsets < 2 {
            return Err(ShearletError::arg("need at least two detector bins"));
        }
        if !(span > 0.0) || !span.is_finite() {
            return Err(ShearletError::arg("detector span must be positive"));
        }
        if image_size == 0 {
            return Err(ShearletError::arg("image size must be positive"));
        }
        Ok(Self {
            n_angles,
            n_offsets,
            span,
            image_size,
        })
    }

    /// Span `sqrt(2)` (the image diagonal) and `ceil(N sqrt(2))` bins.
    pub fn standard(image_size: usize, n_angles: usize) -> Result<Self> {
        let bins = (image_size as f64 * std::f64::consts::SQRT_2).ceil() as usize;
        Self::new(n_angles, bins.max(2), std::f64::consts::SQRT_2, image_size)
    }

    /// Angle `a * pi / n_angles`.
    pub fn angle(&self, a: usize) -> f64 {
        a as f64 * std::f64::consts::PI / self.n_angles as f64
    }

    /// Center of detector bin `b`.
    pub fn offset(&self, b: usize) -> f64 {
        -self.span + (b as f64 + 0.5) * 2.0 * self.span / self.n_offsets as f64
    }

    /// Pixel width.
    pub fn pixel(&self) -> f64 {
        2.0 / self.image_size as f64
    }

    pub fn len(&self) -> usize {
        self.n_angles * self.n_offsets
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Radon-domain data, angle-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Sinogram {
    geometry: ScanGeometry,
    data: Vec<f64>,
}

impl Sinogram {
    pub fn zeros(geometry: ScanGeometry) -> Self {
        Self {
            geometry,
            data: vec![0.0; geometry.len()],
        }
    }

    pub fn from_vec(geometry: ScanGeometry, data: Vec<f64>) -> Result<Self> {
        if data.len() != geometry.len() {
            return Err(ShearletError::arg(format!(
                "sinogram needs {} values, got {}",
                geometry.len(),
                data.len()
            )));
        }
        Ok(Self { geometry, data })
    }

    pub fn geometry(&self) -> &ScanGeometry {
        &self.geometry
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// Value at angle `a`, offset bin `b`.
    pub fn at(&self, a: usize, b: usize) -> f64 {
        self.data[a * self.geometry.n_offsets + b]
    }

    pub fn row(&self, a: usize) -> &[f64] {
        let n = self.geometry.n_offsets;
        &self.data[a * n..(a + 1) * n]
    }
}

/// Visits the bilinear stencil of the ray `(s, phi)`: calls `visit(index, weight)`
/// for every in-image pixel touched, with the step length folded into the weight.
fn trace(n: usize, s: f64, phi: f64, mut visit: impl FnMut(usize, f64)) {
    let d = 2.0 / n as f64;
    let (sin, cos) = phi.sin_cos();
    let half = (std::f64::consts::SQRT_2 / d).ceil() as i64;
    let last = n as i64 - 1;
    for i in -half..=half {
        let t = i as f64 * d;
        let x = s * cos - t * sin;
        let y = s * sin + t * cos;
        let cf = (x + 1.0) / d - 0.5;
        let rf = (1.0 - y) / d - 0.5;
        let (c0, r0) = (cf.floor(), rf.floor());
        let (wc, wr) = (cf - c0, rf - r0);
        let (c0, r0) = (c0 as i64, r0 as i64);
        if c0 < -1 || r0 < -1 || c0 > last || r0 > last {
            continue;
        }
        for (dr, wy) in [(0, 1.0 - wr), (1, wr)] {
            let r = r0 + dr;
            if r < 0 || r > last || wy == 0.0 {
                continue;
            }
            for (dc, wx) in [(0, 1.0 - wc), (1, wc)] {
                let c = c0 + dc;
                if c < 0 || c > last || wx == 0.0 {
                    continue;
                }
                visit(r as usize * n + c as usize, d * wy * wx);
            }
        }
    }
}

fn check_image(f: &ImageGrid, geo: &ScanGeometry) -> Result<()> {
    if f.shape() != (geo.image_size, geo.image_size) {
        return Err(ShearletError::ShapeMismatch {
            expected_rows: geo.image_size,
            expected_cols: geo.image_size,
            rows: f.rows(),
            cols: f.cols(),
        });
    }
    Ok(())
}

/// Discrete line integrals `Rf(s, phi)` by bilinear ray marching at
/// pixel-width steps.
pub fn radon(f: &ImageGrid, geo: &ScanGeometry) -> Result<Sinogram> {
    check_image(f, geo)?;
    let mut out = Sinogram::zeros(*geo);
    let img = f.data();
    out.data
        .par_chunks_mut(geo.n_offsets)
        .enumerate()
        .for_each(|(a, row)| {
            let phi = geo.angle(a);
            for (b, v) in row.iter_mut().enumerate() {
                let mut acc = 0.0;
                trace(geo.image_size, geo.offset(b), phi, |i, w| acc += w * img[i]);
                *v = acc;
            }
        });
    Ok(out)
}

/// Exact transpose of [`radon`].
pub fn backproject(g: &Sinogram) -> ImageGrid {
    let geo = g.geometry;
    let n = geo.image_size;
    let chunks: Vec<usize> = (0..geo.n_angles).step_by(ANGLE_CHUNK).collect();
    let partials: Vec<Vec<f64>> = chunks
        .par_iter()
        .map(|&start| {
            let mut img = vec![0.0; n * n];
            for a in start..(start + ANGLE_CHUNK).min(geo.n_angles) {
                let phi = geo.angle(a);
                for (b, &v) in g.row(a).iter().enumerate() {
                    if v != 0.0 {
                        trace(n, geo.offset(b), phi, |i, w| img[i] += w * v);
                    }
                }
            }
            img
        })
        .collect();
    let mut out = vec![0.0; n * n];
    for p in &partials {
        for (o, v) in out.iter_mut().zip(p) {
            *o += v;
        }
    }
    ImageGrid::from_vec(n, n, out).expect("shape")
}
