use std::path::Path;

use crate::error::{Result, ShearletError};
use crate::grid::ImageGrid;

struct Parser<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> ShearletError {
        ShearletError::format(self.pos as u64, msg)
    }

    /// Skips whitespace and `#` comments.
    fn skip_space(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        self.skip_space();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(match self.data.get(self.pos) {
                None => self.err(format!("unexpected end of file, expected {what}")),
                Some(_) => self.err(format!("expected {what}")),
            });
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| ShearletError::format(start as u64, format!("{what} is out of range")))
    }
}

/// Parses a binary (P5) or ASCII (P2) graymap. Samples keep their raw
/// values in `[0, maxval]`.
pub fn decode_pgm(data: &[u8]) -> Result<ImageGrid> {
    let mut p = Parser { data, pos: 0 };
    let binary = match data.get(..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        Some(b"P3") | Some(b"P6") => {
            return Err(p.err("color images are not supported; convert to grayscale first"))
        }
        _ => return Err(p.err("not a PGM file (expected magic P2 or P5)")),
    };
    p.pos = 2;
    let width = p.number("width")? as usize;
    let height = p.number("height")? as usize;
    let maxval = p.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(p.err(format!("image dimensions must be positive, got {width}x{height}")));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(p.err(format!("maxval must be in 1..=65535, got {maxval}")));
    }
    let n = width * height;
    let mut out = Vec::with_capacity(n);
    if binary {
        if !data.get(p.pos).is_some_and(u8::is_ascii_whitespace) {
            return Err(p.err("expected a single whitespace byte after maxval"));
        }
        p.pos += 1;
        let bytes_per = if maxval < 256 { 1 } else { 2 };
        let need = n * bytes_per;
        let have = data.len() - p.pos;
        if have < need {
            return Err(ShearletError::format(
                data.len() as u64,
                format!("truncated raster: expected {need} bytes, found {have}"),
            ));
        }
        for i in 0..n {
            let at = p.pos + i * bytes_per;
            let v = if bytes_per == 1 {
                data[at] as u32
            } else {
                u16::from_be_bytes([data[at], data[at + 1]]) as u32
            };
            if v > maxval {
                return Err(ShearletError::format(at as u64, format!("sample {v} exceeds maxval {maxval}")));
            }
            out.push(v as f64);
        }
    } else {
        for _ in 0..n {
            let start = p.pos;
            let v = p.number("sample")?;
            if v > maxval {
                return Err(ShearletError::format(start as u64, format!("sample {v} exceeds maxval {maxval}")));
            }
            out.push(v as f64);
        }
    }
    ImageGrid::from_vec(height, width, out)
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<ImageGrid> {
    decode_pgm(&std::fs::read(path)?)
}

/// Binary PGM with maxval 255; values are clamped to `[0, 255]` and rounded
/// half away from zero.
pub fn encode_pgm(img: &ImageGrid) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.cols(), img.rows()).into_bytes();
    out.extend(img.data().iter().map(|v| {
        if v.is_nan() {
            0
        } else {
            v.clamp(0.0, 255.0).round() as u8
        }
    }));
    out
}

pub fn write_pgm(img: &ImageGrid, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, encode_pgm(img))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_order_is_width_height() {
        let mut data = b"P5\n3 2\n255\n".to_vec();
        data.extend([1, 2, 3, 4, 5, 6]);
        let img = decode_pgm(&data).unwrap();
        assert_eq!(img.shape(), (2, 3));
        assert_eq!(img[(1, 0)], 4.0);
    }

    #[test]
    fn ascii_and_binary_agree() {
        let a = decode_pgm(b"P2\n# comment\n3 2 # trailing\n255\n1 2 3\n4 5 6\n").unwrap();
        let mut data = b"P5 3 2 255\n".to_vec();
        data.extend([1, 2, 3, 4, 5, 6]);
        assert_eq!(a, decode_pgm(&data).unwrap());
    }

    #[test]
    fn sixteen_bit_big_endian() {
        let mut data = b"P5\n2 1\n65535\n".to_vec();
        data.extend([0x01, 0x02, 0xff, 0xff]);
        assert_eq!(decode_pgm(&data).unwrap().data(), &[258.0, 65535.0]);
    }

    #[test]
    fn errors_carry_offsets() {
        match decode_pgm(b"P5\n3 2\n255\n\x01\x02") {
            Err(ShearletError::Format { message, .. }) => assert!(message.contains("expected 6 bytes")),
            other => panic!("{other:?}"),
        }
        match decode_pgm(b"P2\n2 x\n") {
            Err(ShearletError::Format { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("{other:?}"),
        }
        assert!(decode_pgm(b"P6\n1 1\n255\n\0\0\0").is_err());
        assert!(decode_pgm(b"P2 1 1 10 11").is_err());
        assert!(decode_pgm(b"P2 1 1 70000 1").is_err());
    }

    #[test]
    fn writer_clamps_and_rounds() {
        let img = ImageGrid::from_vec(1, 5, vec![-3.0, 0.5, 1.49, 254.5, 300.0]).unwrap();
        let bytes = encode_pgm(&img);
        assert_eq!(&bytes[bytes.len() - 5..], &[0, 1, 1, 255, 255]);
    }
}
