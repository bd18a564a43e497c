use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::image::{Image, CHANNELS};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ResizeMode {
    #[default]
    Bilinear,
    Nearest,
}

impl FromStr for ResizeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bilinear" => Ok(ResizeMode::Bilinear),
            "nearest" => Ok(ResizeMode::Nearest),
            other => Err(Error::InvalidArgument(format!("unknown resize mode {other:?}"))),
        }
    }
}

impl fmt::Display for ResizeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResizeMode::Bilinear => "bilinear",
            ResizeMode::Nearest => "nearest",
        })
    }
}

/// Source sample positions and weights for one axis, half-pixel centred.
fn bilinear_axis(src: usize, dst: usize) -> Vec<(usize, usize, f64)> {
    let scale = src as f64 / dst as f64;
    (0..dst)
        .map(|d| {
            let s = ((d as f64 + 0.5) * scale - 0.5).clamp(0.0, (src - 1) as f64);
            let i0 = s.floor() as usize;
            let i1 = (i0 + 1).min(src - 1);
            (i0, i1, s - i0 as f64)
        })
        .collect()
}

pub fn resize(img: &Image, width: usize, height: usize, mode: ResizeMode) -> Result<Image> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidArgument(format!("cannot resize to {width}x{height}")));
    }
    let (sw, sh) = (img.width(), img.height());
    match mode {
        ResizeMode::Nearest => {
            // Integer form of floor((d + 0.5) * src / dst).
            let pick = |d: usize, src: usize, dst: usize| ((2 * d + 1) * src / (2 * dst)).min(src - 1);
            Image::from_fn(width, height, |x, y| img.pixel(pick(x, sw, width), pick(y, sh, height)))
        }
        ResizeMode::Bilinear => {
            let xs = bilinear_axis(sw, width);
            let ys = bilinear_axis(sh, height);
            let raw = img.as_raw();
            let at = |x: usize, y: usize, c: usize| raw[(y * sw + x) * CHANNELS + c] as f64;
            Image::from_fn(width, height, |x, y| {
                let (x0, x1, fx) = xs[x];
                let (y0, y1, fy) = ys[y];
                let mut px = [0u8; 3];
                for (c, v) in px.iter_mut().enumerate() {
                    let top = at(x0, y0, c) * (1.0 - fx) + at(x1, y0, c) * fx;
                    let bottom = at(x0, y1, c) * (1.0 - fx) + at(x1, y1, c) * fx;
                    *v = (top * (1.0 - fy) + bottom * fy).round().clamp(0.0, 255.0) as u8;
                }
                px
            })
        }
    }
}
