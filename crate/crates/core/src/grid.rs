//! Row-major 2D rasters.

use std::ops::{Index, IndexMut};

use rustfft::num_complex::Complex64;

use crate::error::{Result, ShearletError};

/// A dense `rows x cols` raster stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Real-valued image raster.
pub type ImageGrid = Grid<f64>;
/// Complex-valued raster, used for spectra and frequency-domain filters.
pub type ComplexGrid = Grid<Complex64>;

impl<T: Clone + Default> Grid<T> {
    /// Grid filled with `T::default()` (zero for numeric types).
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "grid dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![T::default(); rows * cols],
        }
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        assert!(rows >= 1 && cols >= 1, "grid dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    /// The transposed grid (`cols x rows`).
    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c].clone();
            }
        }
        out
    }
}

impl<T> Grid<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(ShearletError::arg(format!(
                "grid dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(ShearletError::arg(format!(
                "grid {rows}x{cols} needs {} values, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(rows >= 1 && cols >= 1, "grid dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Grid<U> {
        Grid {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Errors unless `other` has the same shape.
    pub fn check_same_shape<U>(&self, other: &Grid<U>) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(ShearletError::ShapeMismatch {
                expected_rows: self.rows,
                expected_cols: self.cols,
                rows: other.rows,
                cols: other.cols,
            });
        }
        Ok(())
    }
}

impl<T> Index<(usize, usize)> for Grid<T> {
    type Output = T;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Grid<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

impl ImageGrid {
    pub fn to_complex(&self) -> ComplexGrid {
        self.map(|&v| Complex64::new(v, 0.0))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &ImageGrid) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    /// `self + alpha * other`, elementwise.
    pub fn axpy(&self, alpha: f64, other: &ImageGrid) -> ImageGrid {
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + alpha * b)
            .collect();
        Grid {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, alpha: f64) -> ImageGrid {
        self.map(|v| alpha * v)
    }
}

impl ComplexGrid {
    pub fn re(&self) -> ImageGrid {
        self.map(|z| z.re)
    }

    pub fn im(&self) -> ImageGrid {
        self.map(|z| z.im)
    }

    pub fn conj(&self) -> ComplexGrid {
        self.map(|z| z.conj())
    }

    /// Elementwise product.
    pub fn mul(&self, other: &ComplexGrid) -> ComplexGrid {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a * b).collect();
        Grid {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }
}
