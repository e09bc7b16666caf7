use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::{
    cascade_highpass, cascade_lowpass, digital_shear, dmaxflat_fan, maxflat_lowpass,
    mirror_highpass, Filter1D, Filter2D,
};
use crate::error::{Result, ShearletError};
use crate::fourier::{centered_fft, centered_ifft, fftshift2, Fft2dPlan};
use crate::grid::{ComplexGrid, ImageGrid};

/// Largest scale count accepted by the builder.
const MAX_SCALES: usize = 12;

/// Frequency cone served by a filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cone {
    /// Cone 1: frequencies with `|w_rows| <= |w_cols|`.
    Horizontal,
    /// Cone 2: the transposed family.
    Vertical,
}

impl Cone {
    pub fn number(self) -> u8 {
        match self {
            Cone::Horizontal => 1,
            Cone::Vertical => 2,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Cone::Horizontal),
            2 => Some(Cone::Vertical),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ShearletIndex {
    pub cone: Cone,
    pub scale: u32,
    pub shear: i32,
    pub lowpass: bool,
}

/// `ceil(2^{j/2})`, the largest shear magnitude at scale `j`.
pub fn max_shear(j: u32) -> i32 {
    let p = 1u64 << j;
    let mut k = (p as f64).sqrt() as u64;
    while k * k < p {
        k += 1;
    }
    while k > 0 && (k - 1) * (k - 1) >= p {
        k -= 1;
    }
    k as i32
}

/// Number of filters in a system with `n_scales` scales.
pub fn shearlet_count(n_scales: usize) -> usize {
    1 + (0..n_scales as u32)
        .map(|j| 4 * max_shear(j) as usize)
        .sum::<usize>()
}

/// Smallest admissible grid side for `n_scales` scales.
pub fn min_grid_size(n_scales: usize) -> usize {
    1 << (n_scales + 1)
}

/// A complete bank of centered frequency-domain shearlet filters.
#[derive(Debug, Clone)]
pub struct ShearletSystem2D {
    rows: usize,
    cols: usize,
    n_scales: usize,
    filters: Vec<ComplexGrid>,
    indices: Vec<ShearletIndex>,
    rms: Vec<f64>,
    dual_frame_weights: ImageGrid,
    system_id: u64,
}

impl ShearletSystem2D {
    /// Assembles a system from stored parts, recomputing nothing but
    /// checking every structural invariant.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        rows: usize,
        cols: usize,
        n_scales: usize,
        indices: Vec<ShearletIndex>,
        filters: Vec<ComplexGrid>,
        rms: Vec<f64>,
        dual_frame_weights: ImageGrid,
        system_id: u64,
    ) -> Result<Self> {
        let n = shearlet_count(n_scales);
        if indices.len() != n || filters.len() != n || rms.len() != n {
            return Err(ShearletError::arg(format!(
                "{n_scales} scales need {n} filters; got {} indices, {} filters, {} rms values",
                indices.len(),
                filters.len(),
                rms.len()
            )));
        }
        if indices.iter().filter(|i| i.lowpass).count() != 1 {
            return Err(ShearletError::arg("system must contain exactly one lowpass filter"));
        }
        for idx in &indices {
            if idx.scale as usize >= n_scales || idx.shear.abs() > max_shear(idx.scale) {
                return Err(ShearletError::arg(format!("invalid shearlet index {idx:?}")));
            }
        }
        let probe = ImageGrid::zeros(rows, cols);
        for f in &filters {
            probe.check_same_shape(f)?;
        }
        probe.check_same_shape(&dual_frame_weights)?;
        if let Some((i, w)) = dual_frame_weights.data().iter().enumerate().find(|(_, w)| !(**w > 0.0)) {
            return Err(ShearletError::FrameDegenerate {
                row: i / cols,
                col: i % cols,
                value: *w,
            });
        }
        Ok(Self {
            rows,
            cols,
            n_scales,
            filters,
            indices,
            rms,
            dual_frame_weights,
            system_id,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn n_scales(&self) -> usize {
        self.n_scales
    }

    pub fn n_shearlets(&self) -> usize {
        self.filters.len()
    }

    pub fn filters(&self) -> &[ComplexGrid] {
        &self.filters
    }

    pub fn indices(&self) -> &[ShearletIndex] {
        &self.indices
    }

    pub fn rms(&self) -> &[f64] {
        &self.rms
    }

    pub fn dual_frame_weights(&self) -> &ImageGrid {
        &self.dual_frame_weights
    }

    /// Fingerprint binding coefficient stacks to this system.
    pub fn system_id(&self) -> u64 {
        self.system_id
    }

    /// Fingerprint of a system with the given parameters and generating filters.
    pub fn fingerprint(
        rows: usize,
        cols: usize,
        n_scales: usize,
        fan: &Filter2D,
        scaling: &Filter1D,
    ) -> u64 {
        let mut hasher = Sha256::new();
        hasher.update(b"shearlet-system/1");
        for v in [rows, cols, n_scales, scaling.len(), scaling.origin()] {
            hasher.update((v as u64).to_le_bytes());
        }
        for t in scaling.taps() {
            hasher.update(t.to_bits().to_le_bytes());
        }
        let (fr, fc) = fan.taps().shape();
        for v in [fr, fc, fan.origin().0, fan.origin().1] {
            hasher.update((v as u64).to_le_bytes());
        }
        for t in fan.taps().data() {
            hasher.update(t.to_bits().to_le_bytes());
        }
        let digest = hasher.finalize();
        u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
    }
}

/// Pointwise `sum_i |psi_i|^2`; fails if any bin is not strictly positive.
pub fn dual_frame_weights(filters: &[ComplexGrid]) -> Result<ImageGrid> {
    let first = filters
        .first()
        .ok_or_else(|| ShearletError::arg("need at least one filter"))?;
    for f in filters {
        first.check_same_shape(f)?;
    }
    let (rows, cols) = first.shape();
    let mut out = ImageGrid::zeros(rows, cols);
    out.data_mut()
        .par_chunks_mut(cols)
        .enumerate()
        .for_each(|(r, line)| {
            for f in filters {
                for (w, z) in line.iter_mut().zip(f.row(r)) {
                    *w += z.norm_sqr();
                }
            }
        });
    if let Some((i, w)) = out.data().iter().enumerate().find(|(_, w)| !(**w > 0.0)) {
        return Err(ShearletError::FrameDegenerate {
            row: i / cols,
            col: i % cols,
            value: *w,
        });
    }
    Ok(out)
}

/// Builds the system with the default maxflat lowpass and fan filter.
pub fn build_default_system(rows: usize, cols: usize, n_scales: usize) -> Result<ShearletSystem2D> {
    build_shearlet_system(rows, cols, n_scales, &dmaxflat_fan(), &maxflat_lowpass())
}

/// Builds the full frequency-domain shearlet system on a `rows x cols` grid.
///
/// Order: the lowpass filter, then for each scale from coarse to fine the
/// cone-1 shears followed by the cone-2 shears, each in increasing `k`.
/// Cone 1 uses `|k| <= ceil(2^{j/2})`, cone 2 `|k| < ceil(2^{j/2})`, so the
/// shared diagonal directions are not duplicated.
pub fn build_shearlet_system(
    rows: usize,
    cols: usize,
    n_scales: usize,
    fan: &Filter2D,
    scaling: &Filter1D,
) -> Result<ShearletSystem2D> {
    if n_scales == 0 || n_scales > MAX_SCALES {
        return Err(ShearletError::arg(format!(
            "number of scales must be in 1..={MAX_SCALES}, got {n_scales}"
        )));
    }
    let min = min_grid_size(n_scales);
    if rows < min || cols < min {
        return Err(ShearletError::GridTooSmall {
            rows,
            cols,
            scales: n_scales,
            min,
        });
    }
    let highpass = mirror_highpass(scaling);

    let cone1 = cone_filters(rows, cols, n_scales, fan, scaling, &highpass, false);
    let cone2 = cone_filters(cols, rows, n_scales, fan, scaling, &highpass, true);

    let hj = cascade_lowpass(scaling, n_scales as u32);
    let (vr, vc) = (hj.centered_response(rows), hj.centered_response(cols));
    let lowpass = ComplexGrid::from_fn(rows, cols, |r, c| vr[r] * vc[c]);

    let mut filters = vec![lowpass];
    let mut indices = vec![ShearletIndex {
        cone: Cone::Horizontal,
        scale: 0,
        shear: 0,
        lowpass: true,
    }];
    for (j, (c1, c2)) in cone1.into_iter().zip(cone2).enumerate() {
        for (shear, f) in c1 {
            indices.push(ShearletIndex {
                cone: Cone::Horizontal,
                scale: j as u32,
                shear,
                lowpass: false,
            });
            filters.push(f);
        }
        for (shear, f) in c2 {
            indices.push(ShearletIndex {
                cone: Cone::Vertical,
                scale: j as u32,
                shear,
                lowpass: false,
            });
            filters.push(f.transpose());
        }
    }

    let n = (rows * cols) as f64;
    let rms = filters
        .iter()
        .map(|f| (f.data().iter().map(|z| z.norm_sqr()).sum::<f64>() / n).sqrt())
        .collect();
    let weights = dual_frame_weights(&filters)?;
    let system_id = ShearletSystem2D::fingerprint(rows, cols, n_scales, fan, scaling);
    Ok(ShearletSystem2D {
        rows,
        cols,
        n_scales,
        filters,
        indices,
        rms,
        dual_frame_weights: weights,
        system_id,
    })
}

/// Filters of one cone built on an `rows x cols` grid where the wedge opens
/// along the column frequency axis. Returns, per scale, `(shear, spectrum)`.
fn cone_filters(
    rows: usize,
    cols: usize,
    n_scales: usize,
    fan: &Filter2D,
    h: &Filter1D,
    g: &Filter1D,
    strict: bool,
) -> Vec<Vec<(i32, ComplexGrid)>> {
    let plan = Fft2dPlan::new(rows, cols);
    let mut fan_spec = fan.wrap(rows, cols).to_complex();
    plan.forward(&mut fan_spec);
    let fan_spec = fftshift2(&fan_spec);

    let kmax = |j: u32| max_shear(j) - strict as i32;
    let key = |j: u32| (j / 2, row_lowpass_level(n_scales as u32, j));
    let levels: BTreeMap<(u32, u32), ImageGrid> = (0..n_scales as u32)
        .map(key)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(|(l, low)| ((l, low), wedge(&plan, &fan_spec, h, l, low)))
        .collect();
    let jobs: Vec<(u32, i32)> = (0..n_scales as u32)
        .flat_map(|j| (-kmax(j)..=kmax(j)).map(move |k| (j, k)))
        .collect();
    let filters: Vec<(u32, i32, ComplexGrid)> = jobs
        .into_par_iter()
        .map(|(j, k)| {
            // The bandpass depends on the column frequency only, so it
            // commutes with the shear and is applied afterwards.
            let band = cascade_highpass(h, g, n_scales as u32 - j)
                .expect("n_scales - j >= 1")
                .centered_response(cols);
            let sheared = digital_shear(&levels[&key(j)], k as i64, j, h);
            let w = centered_fft(&plan, &sheared.to_complex());
            let f = ComplexGrid::from_fn(rows, cols, |r, c| w[(r, c)] * band[c].conj());
            (j, k, f)
        })
        .collect();

    let mut out: Vec<Vec<(i32, ComplexGrid)>> = vec![Vec::new(); n_scales];
    for (j, k, f) in filters {
        out[j as usize].push((k, f));
    }
    out
}

/// Level of the row lowpass in the wedge for scale `j`: `J - ceil(j/2)`,
/// never coarser than the level that removes the fan replicas.
fn row_lowpass_level(n_scales: u32, j: u32) -> u32 {
    (n_scales - (j + 1) / 2).max(j / 2 + 1)
}

/// Centered spatial wedge for level `l = floor(j/2)`: the fan spectrum
/// squeezed by `2^{l+1}` along the row frequency, times the row lowpass
/// `h_{low_level}`. Odd scales shear this wedge with the finer factor
/// `2^{ceil(j/2)}`, which keeps the outermost shears wide enough to reach
/// the diagonal.
fn wedge(plan: &Fft2dPlan, fan_spec: &ComplexGrid, h: &Filter1D, l: u32, low_level: u32) -> ImageGrid {
    let (rows, cols) = fan_spec.shape();
    let factor = 1usize << (l + 1);
    let half = rows / 2;
    let low = cascade_lowpass(h, low_level).centered_response(rows);
    let spec = ComplexGrid::from_fn(rows, cols, |r, c| {
        let u = (r + rows - half) % rows;
        let src = ((factor * u) % rows + half) % rows;
        fan_spec[(src, c)] * low[r]
    });
    centered_ifft(plan, &spec).re()
}

/// Centered frequency index of bin `i` on an axis of length `n`.
#[cfg(test)]
fn freq(i: usize, n: usize) -> i64 {
    i as i64 - (n / 2) as i64
}
