#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shearlet::{Complex64, ComplexGrid, ImageGrid};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_image(rows: usize, cols: usize, seed: u64) -> ImageGrid {
    let mut r = rng(seed);
    ImageGrid::from_fn(rows, cols, |_, _| r.random_range(-1.0..1.0))
}

pub fn random_complex(rows: usize, cols: usize, seed: u64) -> ComplexGrid {
    let mut r = rng(seed);
    ComplexGrid::from_fn(rows, cols, |_, _| {
        Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
    })
}

/// Textbook double-sum DFT, `sign = -1` forward.
pub fn direct_dft(g: &ComplexGrid, sign: f64) -> ComplexGrid {
    let (m, n) = g.shape();
    ComplexGrid::from_fn(m, n, |k1, k2| {
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..m {
            for c in 0..n {
                let phase = sign
                    * 2.0
                    * std::f64::consts::PI
                    * ((k1 * r) as f64 / m as f64 + (k2 * c) as f64 / n as f64);
                acc += g[(r, c)] * Complex64::from_polar(1.0, phase);
            }
        }
        acc
    })
}

pub fn max_abs_diff(a: &ComplexGrid, b: &ComplexGrid) -> f64 {
    a.data().iter().zip(b.data()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
