//! Parallel-beam CT: the discrete Radon transform and its exact adjoint,
//! shearlet-regularized PDHG reconstruction, and test phantoms.
//!
//! Images cover `[-1, 1]^2` with `y` pointing up: pixel `(r, c)` of an
//! `N x N` grid has center `(-1 + (c + 0.5) d, 1 - (r + 0.5) d)`, `d = 2/N`.

mod pdhg;
mod phantom;
mod radon;

pub use pdhg::{
    op_norm, pdhg, pdhg_reconstruct, power_norm, prox_l2_dual, prox_shearlet_l1, resolve_steps,
    soft_threshold, IdentityOperator, LinearOperator, PdhgParams, PdhgResult, RadonOperator,
};
pub use phantom::{
    piecewise_smooth, pixel_center, random_ellipse_specs, random_ellipses, render_ellipses,
    shepp_logan, shepp_logan_ellipses, shepp_logan_value_at, EllipseSpec,
};
pub use radon::{backproject, radon, ScanGeometry, Sinogram};
