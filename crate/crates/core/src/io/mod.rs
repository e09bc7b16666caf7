//! File formats: PGM images and the little-endian binary containers for
//! coefficient stacks (`.shc`), shearlet systems (`.shsys`) and sinograms
//! (`.sng`). Containers are rejected by magic before any payload is read.

mod containers;
mod pgm;

pub use containers::{
    decode_coeffs, decode_sinogram, decode_system, encode_coeffs, encode_sinogram, encode_system,
    load_coeffs, load_sinogram, load_system, save_coeffs, save_sinogram, save_system,
    FORMAT_VERSION,
};
pub use pgm::{decode_pgm, encode_pgm, read_pgm, write_pgm};

use std::io::Read;

use crate::error::{Result, ShearletError};

/// Little-endian reader that tracks its byte offset for error reporting.
pub(crate) struct Cursor<R> {
    inner: R,
    offset: u64,
}

impl<R: Read> Cursor<R> {
    pub(crate) fn new(inner: R) -> Self {
        Self { inner, offset: 0 }
    }

    pub(crate) fn offset(&self) -> u64 {
        self.offset
    }

    pub(crate) fn bytes<const N: usize>(&mut self, what: &str) -> Result<[u8; N]> {
        let mut buf = [0u8; N];
        self.fill(&mut buf, what)?;
        Ok(buf)
    }

    pub(crate) fn fill(&mut self, buf: &mut [u8], what: &str) -> Result<()> {
        let mut got = 0;
        while got < buf.len() {
            match self.inner.read(&mut buf[got..]) {
                Ok(0) => {
                    return Err(ShearletError::format(
                        self.offset + got as u64,
                        format!("truncated {what}: expected {} bytes, found {got}", buf.len()),
                    ))
                }
                Ok(n) => got += n,
                Err(e) if e.kind() == std::io::ErrorKind::Interrupted => {}
                Err(e) => return Err(e.into()),
            }
        }
        self.offset += buf.len() as u64;
        Ok(())
    }

    pub(crate) fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.bytes(what)?))
    }

    pub(crate) fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.bytes(what)?))
    }

    pub(crate) fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.bytes(what)?))
    }

    /// Reads exactly `count` f64 values; a short payload reports the byte
    /// counts expected and found.
    pub(crate) fn f64s(&mut self, count: usize, what: &str) -> Result<Vec<f64>> {
        let want = count
            .checked_mul(8)
            .ok_or_else(|| ShearletError::format(self.offset, format!("{what} size overflows")))?;
        let start = self.offset;
        let mut raw = Vec::new();
        (&mut self.inner).take(want as u64).read_to_end(&mut raw)?;
        if raw.len() != want {
            return Err(ShearletError::format(
                start + raw.len() as u64,
                format!("truncated {what}: expected {want} bytes, found {}", raw.len()),
            ));
        }
        self.offset += want as u64;
        Ok(raw
            .chunks_exact(8)
            .map(|b| f64::from_le_bytes(b.try_into().expect("8 bytes")))
            .collect())
    }

    /// Errors if any bytes remain.
    pub(crate) fn finish(mut self, what: &str) -> Result<()> {
        let mut extra = [0u8; 1];
        match self.inner.read(&mut extra)? {
            0 => Ok(()),
            _ => Err(ShearletError::format(
                self.offset,
                format!("unexpected trailing bytes after {what}"),
            )),
        }
    }
}

pub(crate) fn put_u32(out: &mut Vec<u8>, v: usize) -> Result<()> {
    let v = u32::try_from(v)
        .map_err(|_| ShearletError::arg(format!("value {v} does not fit in a u32 header field")))?;
    out.extend_from_slice(&v.to_le_bytes());
    Ok(())
}

pub(crate) fn put_f64s(out: &mut Vec<u8>, values: &[f64]) {
    out.reserve(values.len() * 8);
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
}
