use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::radon::{backproject, radon, ScanGeometry, Sinogram};
use crate::error::{Result, ShearletError};
use crate::filters::ShearletSystem2D;
use crate::grid::ImageGrid;
use crate::transform::{sheardec2d, shearrec2d};

const POWER_ITERATIONS: usize = 50;
const POWER_TOLERANCE: f64 = 1e-4;
/// Upper bound for `sigma * tau * |T|^2` on entry to the PDHG loop.
const STEP_BOUND: f64 = 0.95;

/// A linear map from images to flat data vectors, with its adjoint.
pub trait LinearOperator: Sync {
    fn image_shape(&self) -> (usize, usize);
    fn data_len(&self) -> usize;
    fn apply(&self, f: &ImageGrid) -> Result<Vec<f64>>;
    fn adjoint(&self, g: &[f64]) -> Result<ImageGrid>;
}

/// The Radon transform for a fixed geometry.
#[derive(Debug, Clone, Copy)]
pub struct RadonOperator(pub ScanGeometry);

impl LinearOperator for RadonOperator {
    fn image_shape(&self) -> (usize, usize) {
        (self.0.image_size, self.0.image_size)
    }

    fn data_len(&self) -> usize {
        self.0.len()
    }

    fn apply(&self, f: &ImageGrid) -> Result<Vec<f64>> {
        radon(f, &self.0).map(Sinogram::into_vec)
    }

    fn adjoint(&self, g: &[f64]) -> Result<ImageGrid> {
        Ok(backproject(&Sinogram::from_vec(self.0, g.to_vec())?))
    }
}

/// Identity on `rows x cols` images.
#[derive(Debug, Clone, Copy)]
pub struct IdentityOperator {
    pub rows: usize,
    pub cols: usize,
}

impl LinearOperator for IdentityOperator {
    fn image_shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    fn data_len(&self) -> usize {
        self.rows * self.cols
    }

    fn apply(&self, f: &ImageGrid) -> Result<Vec<f64>> {
        Ok(f.data().to_vec())
    }

    fn adjoint(&self, g: &[f64]) -> Result<ImageGrid> {
        ImageGrid::from_vec(self.rows, self.cols, g.to_vec())
    }
}

/// Operator norm estimate by power iteration on `T*T` from a seeded start.
pub fn power_norm(op: &dyn LinearOperator, seed: u64) -> Result<f64> {
    let (rows, cols) = op.image_shape();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = ImageGrid::from_fn(rows, cols, |_, _| rng.random::<f64>() - 0.5);
    x = x.scale(1.0 / x.norm());
    let mut est = 0.0;
    for it in 0..POWER_ITERATIONS {
        let y = op.adjoint(&op.apply(&x)?)?;
        let next = y.norm();
        if next == 0.0 {
            return Ok(0.0);
        }
        x = y.scale(1.0 / next);
        if it > 0 && (next - est).abs() <= POWER_TOLERANCE * next {
            return Ok(next.sqrt());
        }
        est = next;
    }
    log::warn!("power iteration did not converge in {POWER_ITERATIONS} steps; using last estimate");
    Ok(est.sqrt())
}

/// `|T|` of the Radon transform for `geo`.
pub fn op_norm(geo: &ScanGeometry) -> Result<f64> {
    power_norm(&RadonOperator(*geo), 0)
}

/// Proximal map of `sigma F*` for `F = 0.5 |. - g|^2`: `(h - sigma g) / (1 + sigma)`.
pub fn prox_l2_dual(h: &[f64], g: &[f64], sigma: f64) -> Result<Vec<f64>> {
    if h.len() != g.len() {
        return Err(ShearletError::arg(format!(
            "dual prox needs equal lengths, got {} and {}",
            h.len(),
            g.len()
        )));
    }
    Ok(h.iter().zip(g).map(|(a, b)| (a - sigma * b) / (1.0 + sigma)).collect())
}

/// Shrinkage toward zero by `t`.
#[inline]
pub fn soft_threshold(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

/// Approximate prox of `t |SH f|_1`: decompose, soft-threshold every
/// coefficient by `t`, reconstruct with the dual frame. `t = 0` returns `f`.
pub fn prox_shearlet_l1(f: &ImageGrid, sys: &ShearletSystem2D, t: f64) -> Result<ImageGrid> {
    if !(t >= 0.0) {
        return Err(ShearletError::arg("shrinkage threshold must be non-negative"));
    }
    if t == 0.0 {
        return Ok(f.clone());
    }
    let mut c = sheardec2d(f, sys)?;
    c.data_mut().iter_mut().for_each(|v| *v = soft_threshold(*v, t));
    shearrec2d(&c, sys)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdhgParams {
    /// Dual step; `None` selects `0.9 / |T|`.
    pub sigma: Option<f64>,
    /// Primal step; `None` selects `0.9 / |T|`.
    pub tau: Option<f64>,
    /// Extrapolation weight in `[0, 1]`.
    pub gamma: f64,
    /// Weight of the shearlet sparsity term.
    pub lambda: f64,
    pub iterations: usize,
}

impl PdhgParams {
    pub fn new(lambda: f64, iterations: usize) -> Self {
        Self {
            sigma: None,
            tau: None,
            gamma: 1.0,
            lambda,
            iterations,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PdhgResult {
    pub image: ImageGrid,
    /// `0.5 |T f - g|^2 + lambda |SH f|_1` after each iteration.
    pub objective: Vec<f64>,
    pub sigma: f64,
    pub tau: f64,
    pub op_norm: f64,
}

/// Resolves the step sizes and enforces `sigma tau |T|^2 <= 0.95`.
pub fn resolve_steps(p: &PdhgParams, op_norm: f64) -> Result<(f64, f64)> {
    let default = 0.9 / op_norm;
    let (mut sigma, mut tau) = (p.sigma.unwrap_or(default), p.tau.unwrap_or(default));
    let product = sigma * tau * op_norm * op_norm;
    if product > STEP_BOUND {
        let s = (STEP_BOUND / product).sqrt();
        log::warn!(
            "step sizes sigma={sigma}, tau={tau} give sigma*tau*|T|^2 = {product:.4}; scaling both by {s:.4}"
        );
        sigma *= s;
        tau *= s;
    }
    let ok = sigma > 0.0
        && tau > 0.0
        && sigma.is_finite()
        && tau.is_finite()
        && op_norm.is_finite()
        && sigma * tau * op_norm * op_norm <= STEP_BOUND * (1.0 + 1e-12);
    if !ok {
        return Err(ShearletError::StepSize { sigma, tau, op_norm });
    }
    Ok((sigma, tau))
}

fn objective(op: &dyn LinearOperator, f: &ImageGrid, g: &[f64], sys: &ShearletSystem2D, lambda: f64) -> Result<f64> {
    let tf = op.apply(f)?;
    let data: f64 = tf.iter().zip(g).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() * 0.5;
    if lambda == 0.0 {
        return Ok(data);
    }
    let l1: f64 = sheardec2d(f, sys)?.data().iter().map(|v| v.abs()).sum();
    Ok(data + lambda * l1)
}

/// Primal-dual hybrid gradient for `min_f 0.5 |T f - g|^2 + lambda |SH f|_1`,
/// starting from `f = 0`, `h = 0`.
pub fn pdhg(
    op: &dyn LinearOperator,
    g: &[f64],
    sys: &ShearletSystem2D,
    p: &PdhgParams,
) -> Result<PdhgResult> {
    if g.len() != op.data_len() {
        return Err(ShearletError::arg(format!(
            "data has {} values, operator produces {}",
            g.len(),
            op.data_len()
        )));
    }
    if op.image_shape() != sys.shape() {
        let (rows, cols) = op.image_shape();
        return Err(ShearletError::ShapeMismatch {
            expected_rows: sys.rows(),
            expected_cols: sys.cols(),
            rows,
            cols,
        });
    }
    if !(p.lambda >= 0.0) || !(0.0..=1.0).contains(&p.gamma) || p.iterations == 0 {
        return Err(ShearletError::arg(
            "PDHG needs lambda >= 0, gamma in [0, 1] and at least one iteration",
        ));
    }
    let op_norm = power_norm(op, 0)?;
    let (sigma, tau) = resolve_steps(p, op_norm)?;

    let (rows, cols) = op.image_shape();
    let mut f = ImageGrid::zeros(rows, cols);
    let mut f_bar = f.clone();
    let mut h = vec![0.0; g.len()];
    let mut history = Vec::with_capacity(p.iterations);
    for _ in 0..p.iterations {
        let tfb = op.apply(&f_bar)?;
        let step: Vec<f64> = h.iter().zip(&tfb).map(|(a, b)| a + sigma * b).collect();
        h = prox_l2_dual(&step, g, sigma)?;
        let grad = op.adjoint(&h)?;
        let f_new = prox_shearlet_l1(&f.axpy(-tau, &grad), sys, tau * p.lambda)?;
        f_bar = f_new.axpy(p.gamma, &f_new.axpy(-1.0, &f));
        f = f_new;
        history.push(objective(op, &f, g, sys, p.lambda)?);
    }
    Ok(PdhgResult {
        image: f,
        objective: history,
        sigma,
        tau,
        op_norm,
    })
}

/// CT reconstruction from a sinogram with shearlet sparsity.
pub fn pdhg_reconstruct(g: &Sinogram, sys: &ShearletSystem2D, p: &PdhgParams) -> Result<PdhgResult> {
    pdhg(&RadonOperator(*g.geometry()), g.data(), sys, p)
}
