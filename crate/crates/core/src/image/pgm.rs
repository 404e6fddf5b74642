//! Netpbm graymap reader/writer (P5 binary and P2 ASCII, maxval 255).

use std::fs;
use std::io::ErrorKind;
use std::path::Path;

use super::Image;
use crate::error::{Error, Result};

/// Reads a P5 or P2 graymap with maxval 255.
pub fn read_pgm(path: impl AsRef<Path>) -> Result<Image> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| match source.kind() {
        ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
        _ => Error::Io {
            path: path.to_path_buf(),
            source,
        },
    })?;
    decode_pgm(&bytes)
}

/// Writes `image` as a binary P5 graymap after rounding and clamping.
pub fn write_pgm(image: &Image, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_pgm(image)?;
    fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Rounds to the nearest integer, then clamps to `[0, 255]`.
pub fn quantize(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

pub fn encode_pgm(image: &Image) -> Result<Vec<u8>> {
    if !image.is_finite() {
        return Err(Error::NonFinite("image written to PGM"));
    }
    let header = format!("P5\n{} {}\n255\n", image.cols(), image.rows());
    let mut out = Vec::with_capacity(header.len() + image.len());
    out.extend_from_slice(header.as_bytes());
    out.extend(image.pixels().iter().map(|&v| quantize(v)));
    Ok(out)
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderCursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn header_number(&mut self, what: &str) -> Result<u32> {
        let tok = self
            .token()
            .ok_or_else(|| Error::MalformedHeader(format!("missing {what}")))?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse::<u32>().ok())
            .ok_or_else(|| {
                Error::MalformedHeader(format!("invalid {what} {:?}", String::from_utf8_lossy(tok)))
            })
    }
}

pub fn decode_pgm(bytes: &[u8]) -> Result<Image> {
    let mut cur = HeaderCursor { bytes, pos: 0 };
    let magic = cur
        .token()
        .ok_or_else(|| Error::MalformedHeader("empty file".into()))?;
    let binary = match magic {
        b"P5" => true,
        b"P2" => false,
        other => {
            return Err(Error::MalformedHeader(format!(
                "unsupported magic {:?}",
                String::from_utf8_lossy(other)
            )))
        }
    };
    let cols = cur.header_number("width")? as usize;
    let rows = cur.header_number("height")? as usize;
    let maxval = cur.header_number("maxval")?;
    if cols == 0 || rows == 0 {
        return Err(Error::MalformedHeader(format!(
            "zero dimension {cols}x{rows}"
        )));
    }
    if maxval != 255 {
        return Err(Error::UnsupportedMaxval(maxval));
    }
    let expected = rows * cols;

    let pixels: Vec<f64> = if binary {
        // Exactly one whitespace byte separates maxval from the raster.
        match bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => {}
            _ => return Err(Error::TruncatedPayload { expected, found: 0 }),
        }
        let raster = &bytes[cur.pos + 1..];
        if raster.len() < expected {
            return Err(Error::TruncatedPayload {
                expected,
                found: raster.len(),
            });
        }
        raster[..expected].iter().map(|&b| f64::from(b)).collect()
    } else {
        let mut pixels = Vec::with_capacity(expected);
        while pixels.len() < expected {
            let Some(tok) = cur.token() else {
                return Err(Error::TruncatedPayload {
                    expected,
                    found: pixels.len(),
                });
            };
            let value = std::str::from_utf8(tok)
                .ok()
                .and_then(|s| s.parse::<u32>().ok())
                .filter(|&v| v <= maxval)
                .ok_or_else(|| {
                    Error::MalformedPixels(format!("bad sample {:?}", String::from_utf8_lossy(tok)))
                })?;
            pixels.push(f64::from(value));
        }
        pixels
    };
    Image::new(rows, cols, pixels)
}
