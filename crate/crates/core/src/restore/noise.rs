use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::ImageGrid;

/// Seeded field of i.i.d. standard normal samples (Box-Muller over ChaCha8).
pub fn gaussian_field(rows: usize, cols: usize, seed: u64) -> ImageGrid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rows * cols;
    let mut data = Vec::with_capacity(n + 1);
    while data.len() < n {
        let u1 = 1.0 - rng.random::<f64>();
        let u2 = rng.random::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * std::f64::consts::PI * u2).sin_cos();
        data.push(r * c);
        data.push(r * s);
    }
    data.truncate(n);
    ImageGrid::from_vec(rows, cols, data).expect("length matches")
}

/// `f + sigma * e` with `e` a seeded standard normal field.
pub fn add_gaussian_noise(f: &ImageGrid, sigma: f64, seed: u64) -> ImageGrid {
    if sigma == 0.0 {
        return f.clone();
    }
    let e = gaussian_field(f.rows(), f.cols(), seed);
    f.axpy(sigma, &e)
}
