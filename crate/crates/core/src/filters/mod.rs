//! Generating filters, scale cascades, the digital shear, and the
//! frequency-domain shearlet system built from them.
//!
//! Filters are finite tap sequences with an explicit origin. A tap stored at
//! index `i` sits at position `i - origin`.

mod shear;
mod system;

use rustfft::num_complex::Complex64;

use crate::error::{Result, ShearletError};
use crate::fourier::fftshift_1d;
use crate::grid::ImageGrid;

pub use shear::{digital_shear, shear_factor};
pub use system::{
    build_default_system, build_shearlet_system, dual_frame_weights, max_shear, min_grid_size,
    shearlet_count, Cone, ShearletIndex, ShearletSystem2D,
};

/// Axis of a 2D filter or grid: `Rows` runs down the columns (vertical),
/// `Cols` runs along each row (horizontal).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Rows,
    Cols,
}

/// One-dimensional FIR filter.
#[derive(Debug, Clone, PartialEq)]
pub struct Filter1D {
    taps: Vec<f64>,
    origin: usize,
}

impl Filter1D {
    pub fn new(taps: Vec<f64>, origin: usize) -> Result<Self> {
        if taps.is_empty() {
            return Err(ShearletError::arg("filter needs at least one tap"));
        }
        if origin >= taps.len() {
            return Err(ShearletError::arg(format!(
                "origin {origin} outside {} taps",
                taps.len()
            )));
        }
        if taps.iter().any(|t| !t.is_finite()) {
            return Err(ShearletError::arg("filter taps must be finite"));
        }
        Ok(Self { taps, origin })
    }

    /// The Kronecker delta `[1]`.
    pub fn delta() -> Self {
        Self {
            taps: vec![1.0],
            origin: 0,
        }
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    /// Tap at signed position `n` (zero outside the support).
    pub fn at(&self, n: i64) -> f64 {
        let i = n + self.origin as i64;
        if i < 0 || i >= self.taps.len() as i64 {
            0.0
        } else {
            self.taps[i as usize]
        }
    }

    /// Iterator over `(position, tap)` pairs.
    pub fn positions(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let o = self.origin as i64;
        self.taps.iter().enumerate().map(move |(i, &t)| (i as i64 - o, t))
    }

    /// Full linear convolution; origins add.
    pub fn convolve(&self, other: &Filter1D) -> Filter1D {
        let mut taps = vec![0.0; self.len() + other.len() - 1];
        for (i, &a) in self.taps.iter().enumerate() {
            for (k, &b) in other.taps.iter().enumerate() {
                taps[i + k] += a * b;
            }
        }
        Filter1D {
            taps,
            origin: self.origin + other.origin,
        }
    }

    /// Time reversal `h(-n)`.
    pub fn reversed(&self) -> Filter1D {
        let mut taps = self.taps.clone();
        taps.reverse();
        Filter1D {
            origin: self.taps.len() - 1 - self.origin,
            taps,
        }
    }

    /// Inserts `factor - 1` zeros between consecutive taps.
    pub fn upsample(&self, factor: usize) -> Result<Filter1D> {
        check_factor(factor)?;
        let mut taps = vec![0.0; (self.len() - 1) * factor + 1];
        for (i, &t) in self.taps.iter().enumerate() {
            taps[i * factor] = t;
        }
        Ok(Filter1D {
            taps,
            origin: self.origin * factor,
        })
    }

    /// Discrete-time Fourier transform `sum_n h(n) e^{-i w n}`.
    pub fn dtft(&self, w: f64) -> Complex64 {
        self.positions()
            .map(|(n, t)| Complex64::from_polar(t, -w * n as f64))
            .sum()
    }

    /// Taps wrapped periodically onto `n` samples (position `p` lands at `p mod n`).
    pub fn wrap(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for (p, t) in self.positions() {
            out[p.rem_euclid(n as i64) as usize] += t;
        }
        out
    }

    /// Centered `n`-point DFT of the periodically wrapped filter. Entry `i`
    /// holds the response at frequency `2*pi*(i - n/2)/n`.
    pub fn centered_response(&self, n: usize) -> Vec<Complex64> {
        let wrapped = self.wrap(n);
        let dft: Vec<Complex64> = (0..n)
            .map(|u| {
                wrapped
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0.0)
                    .map(|(p, &v)| {
                        let phase = -2.0 * std::f64::consts::PI * ((u * p) % n) as f64 / n as f64;
                        Complex64::from_polar(v, phase)
                    })
                    .sum()
            })
            .collect();
        fftshift_1d(&dft)
    }
}

/// Two-dimensional FIR filter stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Filter2D {
    taps: ImageGrid,
    origin: (usize, usize),
}

impl Filter2D {
    pub fn new(taps: ImageGrid, origin: (usize, usize)) -> Result<Self> {
        if origin.0 >= taps.rows() || origin.1 >= taps.cols() {
            return Err(ShearletError::arg(format!(
                "origin {origin:?} outside {}x{} taps",
                taps.rows(),
                taps.cols()
            )));
        }
        if taps.data().iter().any(|t| !t.is_finite()) {
            return Err(ShearletError::arg("filter taps must be finite"));
        }
        Ok(Self { taps, origin })
    }

    pub fn taps(&self) -> &ImageGrid {
        &self.taps
    }

    pub fn origin(&self) -> (usize, usize) {
        self.origin
    }

    /// Tap at signed position `(n1, n2)` = (row offset, column offset).
    pub fn at(&self, n1: i64, n2: i64) -> f64 {
        let r = n1 + self.origin.0 as i64;
        let c = n2 + self.origin.1 as i64;
        if r < 0 || c < 0 || r >= self.taps.rows() as i64 || c >= self.taps.cols() as i64 {
            0.0
        } else {
            self.taps[(r as usize, c as usize)]
        }
    }

    /// Inserts `factor - 1` zero rows or columns between taps along `axis`.
    pub fn upsample(&self, axis: Axis, factor: usize) -> Result<Filter2D> {
        check_factor(factor)?;
        let (rows, cols) = self.taps.shape();
        let (fr, fc) = match axis {
            Axis::Rows => (factor, 1),
            Axis::Cols => (1, factor),
        };
        let mut taps = ImageGrid::zeros((rows - 1) * fr + 1, (cols - 1) * fc + 1);
        for r in 0..rows {
            for c in 0..cols {
                taps[(r * fr, c * fc)] = self.taps[(r, c)];
            }
        }
        Ok(Filter2D {
            taps,
            origin: (self.origin.0 * fr, self.origin.1 * fc),
        })
    }

    /// DTFT at `(w1, w2)`, where `w1` pairs with the row offset and `w2`
    /// with the column offset.
    pub fn dtft(&self, w1: f64, w2: f64) -> Complex64 {
        let (o1, o2) = (self.origin.0 as i64, self.origin.1 as i64);
        let mut acc = Complex64::default();
        for r in 0..self.taps.rows() {
            for c in 0..self.taps.cols() {
                let t = self.taps[(r, c)];
                if t != 0.0 {
                    let phase = -(w1 * (r as i64 - o1) as f64 + w2 * (c as i64 - o2) as f64);
                    acc += Complex64::from_polar(t, phase);
                }
            }
        }
        acc
    }

    /// Taps wrapped periodically onto a `rows x cols` grid with position
    /// `(0,0)` at index `(0,0)`.
    pub fn wrap(&self, rows: usize, cols: usize) -> ImageGrid {
        let mut out = ImageGrid::zeros(rows, cols);
        let (o1, o2) = (self.origin.0 as i64, self.origin.1 as i64);
        for r in 0..self.taps.rows() {
            for c in 0..self.taps.cols() {
                let rr = (r as i64 - o1).rem_euclid(rows as i64) as usize;
                let cc = (c as i64 - o2).rem_euclid(cols as i64) as usize;
                out[(rr, cc)] += self.taps[(r, c)];
            }
        }
        out
    }
}

fn check_factor(factor: usize) -> Result<()> {
    if factor == 0 {
        return Err(ShearletError::arg("upsampling factor must be at least 1"));
    }
    Ok(())
}

const MAXFLAT_HALF: [f64; 5] = [
    0.010_493_326_175_841,
    -0.026_348_304_703_363_1,
    -0.051_776_695_296_637,
    0.276_348_304_703_363,
    0.582_566_738_241_592,
];

/// Upper-left 9x9 quadrant of the 17x17 fan filter; the rest follows by
/// mirroring about the center tap.
const FAN_QUADRANT: [[f64; 9]; 9] = [
    [0.0, 0.0, -3.086131530799681e-07, 0.0, -3.703357836959617e-07, 0.0, -4.814365188047501e-07, 0.0, -8.394277763775131e-07],
    [0.0, 6.172263061599361e-07, 0.0, -6.048817800367374e-06, 0.0, -7.678295248629603e-06, 0.0, -1.217170275747394e-05, 0.0],
    [-3.086131530799681e-07, 0.0, 1.2838307168126673e-05, 0.0, -5.9401859704832256e-05, 0.0, -8.78930259971749e-05, 0.0, -0.00010969345913074385],
    [0.0, -6.048817800367374e-06, 0.0, 0.00013512318294453326, 0.0, -0.0004354408144697117, 0.0, -0.0005784891831853386, 0.0],
    [-3.703357836959617e-07, 0.0, -5.9401859704832256e-05, 0.0, 0.0010726899420014765, 0.0006103515625000001, -0.001961545200976277, 0.00036621093749999995, -0.002236284974374188],
    [0.0, -7.678295248629603e-06, 0.0, -0.0004354408144697117, -0.0006103515625000001, 0.005324761965137277, 0.006347656249999999, -0.005311429876924222, 0.004150390625],
    [-4.814365188047501e-07, 0.0, -8.78930259971749e-05, 0.0, -0.001961545200976277, -0.006347656249999999, 0.0164442913830265, 0.03369140625000001, -0.008791006144322492],
    [0.0, -1.217170275747394e-05, 0.0, -0.0005784891831853386, -0.00036621093749999995, -0.005311429876924222, -0.03369140625000001, 0.03313036265470196, 0.177490234375],
    [-8.394277763775131e-07, 0.0, -0.00010969345913074385, 0.0, -0.002236284974374188, -0.004150390625, -0.008791006144322492, -0.177490234375, 0.5948654118639756],
];

/// Default 9-tap maximally flat lowpass, symmetric about its center tap.
pub fn maxflat_lowpass() -> Filter1D {
    let taps = (0..9)
        .map(|i| MAXFLAT_HALF[if i <= 4 { i } else { 8 - i }])
        .collect();
    Filter1D { taps, origin: 4 }
}

/// Highpass mirror `g(n) = (-1)^n h(n)`.
pub fn mirror_highpass(h: &Filter1D) -> Filter1D {
    let taps = h
        .positions()
        .map(|(n, t)| if n.rem_euclid(2) == 0 { t } else { -t })
        .collect();
    Filter1D {
        taps,
        origin: h.origin,
    }
}

/// Default 17x17 maximally flat fan filter. Its passband is the horizontal
/// double cone `|w_rows| <= |w_cols|` and its DC gain is `1/sqrt(2)`.
pub fn dmaxflat_fan() -> Filter2D {
    let taps = ImageGrid::from_fn(17, 17, |r, c| {
        let q = |i: usize| if i <= 8 { i } else { 16 - i };
        FAN_QUADRANT[q(r)][q(c)]
    });
    Filter2D {
        taps,
        origin: (8, 8),
    }
}

/// `h_j`: the product `prod_{k<j} h(2^k w)` realised as iterated convolution
/// with dyadically upsampled copies of `h`. `j = 0` gives the delta.
pub fn cascade_lowpass(h: &Filter1D, j: u32) -> Filter1D {
    let mut acc = Filter1D::delta();
    for k in 0..j {
        let up = h.upsample(1 << k).expect("factor is positive");
        acc = acc.convolve(&up);
    }
    acc
}

/// `g_j`: `g(2^{j-1} w) h_{j-1}(w)` in the spatial domain.
pub fn cascade_highpass(h: &Filter1D, g: &Filter1D, j: u32) -> Result<Filter1D> {
    if j == 0 {
        return Err(ShearletError::arg("highpass cascade needs j >= 1"));
    }
    let up = g.upsample(1 << (j - 1))?;
    Ok(up.convolve(&cascade_lowpass(h, j - 1)))
}
