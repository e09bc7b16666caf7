use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, ShearletError};
use crate::grid::ImageGrid;

/// Filled ellipse with additive intensity, in `[-1, 1]^2` image coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseSpec {
    pub x0: f64,
    pub y0: f64,
    /// Semi-axis along the rotated x direction.
    pub a: f64,
    /// Semi-axis along the rotated y direction.
    pub b: f64,
    /// Counter-clockwise rotation in radians.
    pub phi: f64,
    pub intensity: f64,
}

impl EllipseSpec {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let (s, c) = self.phi.sin_cos();
        let (dx, dy) = (x - self.x0, y - self.y0);
        let u = dx * c + dy * s;
        let v = -dx * s + dy * c;
        (u / self.a).powi(2) + (v / self.b).powi(2) <= 1.0
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.a * self.b
    }
}

/// Center of pixel `(r, c)` on an `n x n` grid covering `[-1, 1]^2`, y up.
pub fn pixel_center(n: usize, r: usize, c: usize) -> (f64, f64) {
    let d = 2.0 / n as f64;
    (-1.0 + (c as f64 + 0.5) * d, 1.0 - (r as f64 + 0.5) * d)
}

/// Sum of ellipse indicators sampled at pixel centers.
pub fn render_ellipses(n: usize, ellipses: &[EllipseSpec]) -> ImageGrid {
    ImageGrid::from_fn(n, n, |r, c| {
        let (x, y) = pixel_center(n, r, c);
        ellipses
            .iter()
            .filter(|e| e.contains(x, y))
            .map(|e| e.intensity)
            .sum()
    })
}

/// `(A, a, b, x0, y0, phi in degrees)` rows of the modified Shepp-Logan table.
const SHEPP_LOGAN: [[f64; 6]; 10] = [
    [1.0, 0.69, 0.92, 0.0, 0.0, 0.0],
    [-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0],
    [-0.2, 0.11, 0.31, 0.22, 0.0, -18.0],
    [-0.2, 0.16, 0.41, -0.22, 0.0, 18.0],
    [0.1, 0.21, 0.25, 0.0, 0.35, 0.0],
    [0.1, 0.046, 0.046, 0.0, 0.1, 0.0],
    [0.1, 0.046, 0.046, 0.0, -0.1, 0.0],
    [0.1, 0.046, 0.023, -0.08, -0.605, 0.0],
    [0.1, 0.023, 0.023, 0.0, -0.606, 0.0],
    [0.1, 0.023, 0.046, 0.06, -0.605, 0.0],
];

/// The ten ellipses of the modified (high-contrast) Shepp-Logan phantom.
pub fn shepp_logan_ellipses() -> Vec<EllipseSpec> {
    SHEPP_LOGAN
        .iter()
        .map(|&[intensity, a, b, x0, y0, deg]| EllipseSpec {
            x0,
            y0,
            a,
            b,
            phi: deg.to_radians(),
            intensity,
        })
        .collect()
}

/// Phantom value at a point of `[-1, 1]^2`.
pub fn shepp_logan_value_at(x: f64, y: f64) -> f64 {
    shepp_logan_ellipses()
        .iter()
        .filter(|e| e.contains(x, y))
        .map(|e| e.intensity)
        .sum()
}

/// `n x n` modified Shepp-Logan phantom with values in `[0, 1]`.
pub fn shepp_logan(n: usize) -> Result<ImageGrid> {
    if n < 16 {
        return Err(ShearletError::arg(format!("phantom size must be >= 16, got {n}")));
    }
    Ok(render_ellipses(n, &shepp_logan_ellipses()))
}

fn random_spec(rng: &mut ChaCha8Rng, intensity: (f64, f64)) -> EllipseSpec {
    EllipseSpec {
        x0: rng.random_range(-0.6..=0.6),
        y0: rng.random_range(-0.6..=0.6),
        a: rng.random_range(0.05..=0.35),
        b: rng.random_range(0.05..=0.35),
        phi: rng.random_range(0.0..std::f64::consts::PI),
        intensity: rng.random_range(intensity.0..=intensity.1),
    }
}

/// The ellipses drawn by [`random_ellipses`] for a given seed.
pub fn random_ellipse_specs(count: usize, seed: u64) -> Vec<EllipseSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_spec(&mut rng, (0.1, 1.0))).collect()
}

/// Sum of `count` seeded random ellipses, clipped to `[0, 1]`.
pub fn random_ellipses(n: usize, count: usize, seed: u64) -> Result<ImageGrid> {
    if count == 0 {
        return Err(ShearletError::arg("need at least one ellipse"));
    }
    if n == 0 {
        return Err(ShearletError::arg("image size must be positive"));
    }
    let img = render_ellipses(n, &random_ellipse_specs(count, seed));
    Ok(img.map(|v| v.clamp(0.0, 1.0)))
}

/// Seeded piecewise-smooth test image in `[0, 255]`: a smooth background
/// plus random ellipses, each carrying its own linear ramp.
pub fn piecewise_smooth(n: usize, seed: u64) -> ImageGrid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shapes: Vec<(EllipseSpec, f64, f64)> = (0..8)
        .map(|_| {
            let e = random_spec(&mut rng, (-70.0, 110.0));
            (e, rng.random_range(-25.0..=25.0), rng.random_range(-25.0..=25.0))
        })
        .collect();
    ImageGrid::from_fn(n, n, |r, c| {
        let (x, y) = pixel_center(n, r, c);
        let mut v = 90.0 + 30.0 * x - 20.0 * y * y;
        for (e, gx, gy) in &shapes {
            if e.contains(x, y) {
                v += e.intensity + gx * (x - e.x0) + gy * (y - e.y0);
            }
        }
        v.clamp(0.0, 255.0)
    })
}
