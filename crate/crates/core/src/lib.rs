//! Digital shearlet transform on 2D grids, with shearlet-domain denoising,
//! inpainting and sparsity-regularized CT reconstruction.

pub mod ct;
pub mod error;
pub mod filters;
pub mod fourier;
pub mod grid;
pub mod io;
pub mod restore;
pub mod transform;

pub use error::{Result, ShearletError};
pub use grid::{ComplexGrid, Grid, ImageGrid};
pub use rustfft::num_complex::Complex64;
