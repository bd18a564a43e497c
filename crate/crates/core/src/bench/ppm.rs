//! Binary PPM (P6, maxval 255).

use std::path::Path;

use crate::error::{Error, Result};
use crate::image::{Image, CHANNELS};

pub fn encode_ppm(img: &Image) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.as_raw());
    out
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&b| b != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::format(start, format!("expected {what}")))
    }
}

pub fn decode_ppm(bytes: &[u8]) -> Result<Image> {
    match bytes.get(..2) {
        Some(b"P6") => {}
        Some([b'P', d]) if d.is_ascii_digit() => {
            return Err(Error::UnsupportedFormat(format!("PNM type P{}; only P6 is supported", *d as char)));
        }
        _ => return Err(Error::format(0, "missing P6 magic")),
    }
    let mut h = Header { bytes, pos: 2 };
    let width = h.number("width")?;
    let height = h.number("height")?;
    let maxval_at = h.pos;
    let maxval = h.number("maxval")?;
    if maxval != 255 {
        return Err(Error::format(maxval_at, format!("maxval {maxval} is not 255")));
    }
    if !bytes.get(h.pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(Error::format(h.pos, "expected whitespace after maxval"));
    }
    let start = h.pos + 1;
    let len = width * height * CHANNELS;
    let body = bytes
        .get(start..start + len)
        .ok_or_else(|| Error::format(bytes.len(), format!("body has {} of {len} bytes", bytes.len() - start)))?;
    Image::from_raw(width, height, body.to_vec())
}

pub fn read_ppm(path: impl AsRef<Path>) -> Result<Image> {
    let path = path.as_ref();
    decode_ppm(&std::fs::read(path).map_err(|e| Error::io(path, e))?)
}

pub fn write_ppm(path: impl AsRef<Path>, img: &Image) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_ppm(img)).map_err(|e| Error::io(path, e))
}
