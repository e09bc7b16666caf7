use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use super::{put_f64s, put_u32, Cursor};
use crate::ct::{ScanGeometry, Sinogram};
use crate::error::{Result, ShearletError};
use crate::filters::{dmaxflat_fan, maxflat_lowpass, Cone, ShearletIndex, ShearletSystem2D};
use crate::grid::{ComplexGrid, ImageGrid};
use crate::transform::CoefficientStack;
use crate::Complex64;

/// The only container version understood.
pub const FORMAT_VERSION: u32 = 1;

const SHC_MAGIC: &[u8; 4] = b"SHC1";
const SHSY_MAGIC: &[u8; 4] = b"SHSY";
const SNG_MAGIC: &[u8; 4] = b"SNG1";

fn check_magic<R: Read>(cur: &mut Cursor<R>, magic: &[u8; 4], kind: &str) -> Result<()> {
    let got: [u8; 4] = cur.bytes("magic")?;
    if &got != magic {
        return Err(ShearletError::format(
            0,
            format!(
                "not a {kind} file: magic {:?}, expected {:?}",
                String::from_utf8_lossy(&got),
                String::from_utf8_lossy(magic)
            ),
        ));
    }
    let at = cur.offset();
    let version = cur.u32("version")?;
    if version != FORMAT_VERSION {
        return Err(ShearletError::format(
            at,
            format!("unsupported {kind} version {version} (only {FORMAT_VERSION} is supported)"),
        ));
    }
    Ok(())
}

fn dim<R: Read>(cur: &mut Cursor<R>, what: &str) -> Result<usize> {
    let at = cur.offset();
    match cur.u32(what)? {
        0 => Err(ShearletError::format(at, format!("{what} must be positive"))),
        v => Ok(v as usize),
    }
}

fn product(dims: &[usize], at: u64) -> Result<usize> {
    dims.iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| ShearletError::format(at, "header dimensions overflow"))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path)?))
}

pub fn encode_coeffs(c: &CoefficientStack) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(28 + c.data().len() * 8);
    out.extend_from_slice(SHC_MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    put_u32(&mut out, c.rows())?;
    put_u32(&mut out, c.cols())?;
    put_u32(&mut out, c.n_shearlets())?;
    out.extend_from_slice(&c.system_id().to_le_bytes());
    put_f64s(&mut out, c.data());
    Ok(out)
}

pub fn decode_coeffs(r: impl Read) -> Result<CoefficientStack> {
    let mut cur = Cursor::new(r);
    check_magic(&mut cur, SHC_MAGIC, "coefficient")?;
    let rows = dim(&mut cur, "rows")?;
    let cols = dim(&mut cur, "cols")?;
    let n = dim(&mut cur, "nShearlets")?;
    let id = cur.u64("systemId")?;
    let count = product(&[rows, cols, n], cur.offset())?;
    let data = cur.f64s(count, "coefficient data")?;
    cur.finish("coefficient data")?;
    CoefficientStack::from_vec(rows, cols, n, data, id)
}

pub fn save_coeffs(c: &CoefficientStack, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, encode_coeffs(c)?)?;
    Ok(())
}

pub fn load_coeffs(path: impl AsRef<Path>) -> Result<CoefficientStack> {
    decode_coeffs(open(path.as_ref())?)
}

pub fn encode_system(sys: &ShearletSystem2D) -> Result<Vec<u8>> {
    let n = sys.n_shearlets();
    let cells = sys.rows() * sys.cols();
    let mut out = Vec::with_capacity(24 + 4 * n + 8 * (n + cells * (2 * n + 1)));
    out.extend_from_slice(SHSY_MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    put_u32(&mut out, sys.rows())?;
    put_u32(&mut out, sys.cols())?;
    put_u32(&mut out, sys.n_scales())?;
    put_u32(&mut out, n)?;
    for idx in sys.indices() {
        out.push(idx.cone.number());
        out.push(idx.scale as u8);
        out.push(idx.shear as i8 as u8);
        out.push(idx.lowpass as u8);
    }
    for f in sys.filters() {
        out.reserve(cells * 16);
        for z in f.data() {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    put_f64s(&mut out, sys.rms());
    put_f64s(&mut out, sys.dual_frame_weights().data());
    Ok(out)
}

/// Reads a system file. The file does not store a fingerprint, so the
/// loaded system is identified as one built from the default generating
/// filters with the stored grid size and scale count.
pub fn decode_system(r: impl Read) -> Result<ShearletSystem2D> {
    let mut cur = Cursor::new(r);
    check_magic(&mut cur, SHSY_MAGIC, "shearlet system")?;
    let rows = dim(&mut cur, "rows")?;
    let cols = dim(&mut cur, "cols")?;
    let n_scales = dim(&mut cur, "nScales")?;
    let at = cur.offset();
    let n = dim(&mut cur, "nShearlets")?;
    if n_scales > 64 || n != crate::filters::shearlet_count(n_scales) {
        return Err(ShearletError::format(
            at,
            format!("nShearlets {n} is inconsistent with nScales {n_scales}"),
        ));
    }
    let cells = product(&[rows, cols], cur.offset())?;
    let mut indices = Vec::with_capacity(n);
    for _ in 0..n {
        let at = cur.offset();
        let [cone, scale, shear, lowpass]: [u8; 4] = cur.bytes("index table")?;
        let cone = Cone::from_number(cone)
            .ok_or_else(|| ShearletError::format(at, format!("invalid cone {cone}")))?;
        if lowpass > 1 {
            return Err(ShearletError::format(at + 3, format!("invalid lowpass flag {lowpass}")));
        }
        indices.push(ShearletIndex {
            cone,
            scale: scale as u32,
            shear: shear as i8 as i32,
            lowpass: lowpass == 1,
        });
    }
    let mut filters = Vec::with_capacity(n);
    for _ in 0..n {
        let raw = cur.f64s(2 * cells, "filter data")?;
        let data = raw.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
        filters.push(ComplexGrid::from_vec(rows, cols, data)?);
    }
    let rms = cur.f64s(n, "rms table")?;
    let weights = ImageGrid::from_vec(rows, cols, cur.f64s(cells, "dual-frame weights")?)?;
    cur.finish("dual-frame weights")?;
    let id = ShearletSystem2D::fingerprint(rows, cols, n_scales, &dmaxflat_fan(), &maxflat_lowpass());
    ShearletSystem2D::from_parts(rows, cols, n_scales, indices, filters, rms, weights, id)
}

pub fn save_system(sys: &ShearletSystem2D, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, encode_system(sys)?)?;
    Ok(())
}

pub fn load_system(path: impl AsRef<Path>) -> Result<ShearletSystem2D> {
    decode_system(open(path.as_ref())?)
}

pub fn encode_sinogram(g: &Sinogram) -> Result<Vec<u8>> {
    let geo = g.geometry();
    let mut out = Vec::with_capacity(32 + g.data().len() * 8);
    out.extend_from_slice(SNG_MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    put_u32(&mut out, geo.n_angles)?;
    put_u32(&mut out, geo.n_offsets)?;
    out.extend_from_slice(&geo.span.to_le_bytes());
    put_u32(&mut out, geo.image_size)?;
    put_f64s(&mut out, g.data());
    Ok(out)
}

pub fn decode_sinogram(r: impl Read) -> Result<Sinogram> {
    let mut cur = Cursor::new(r);
    check_magic(&mut cur, SNG_MAGIC, "sinogram")?;
    let n_angles = dim(&mut cur, "nAngles")?;
    let n_offsets = dim(&mut cur, "nOffsets")?;
    let span = cur.f64("span")?;
    let image_size = dim(&mut cur, "imageSize")?;
    let geo = ScanGeometry::new(n_angles, n_offsets, span, image_size)
        .map_err(|e| ShearletError::format(cur.offset(), e.to_string()))?;
    let count = product(&[n_angles, n_offsets], cur.offset())?;
    let data = cur.f64s(count, "sinogram data")?;
    cur.finish("sinogram data")?;
    Sinogram::from_vec(geo, data)
}

pub fn save_sinogram(g: &Sinogram, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, encode_sinogram(g)?)?;
    Ok(())
}

pub fn load_sinogram(path: impl AsRef<Path>) -> Result<Sinogram> {
    decode_sinogram(open(path.as_ref())?)
}
