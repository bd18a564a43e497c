//! The CIFAR-10 binary batch layout: 3073-byte records of one label byte
//! followed by red, green and blue 32×32 planes.

use std::path::Path;

use crate::error::{Error, Result};
use crate::image::{Image, CHANNELS};

pub const SIDE: usize = 32;
pub const PLANE: usize = SIDE * SIDE;
pub const RECORD_LEN: usize = 1 + 3 * PLANE;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cifar10Record {
    pub label: u8,
    pub image: Image,
}

pub fn parse_cifar10(bytes: &[u8]) -> Result<Vec<Cifar10Record>> {
    if bytes.len() % RECORD_LEN != 0 {
        let offset = bytes.len() - bytes.len() % RECORD_LEN;
        return Err(Error::format(
            offset,
            format!(
                "truncated record: {} of {RECORD_LEN} bytes",
                bytes.len() - offset
            ),
        ));
    }
    bytes
        .chunks_exact(RECORD_LEN)
        .enumerate()
        .map(|(i, rec)| {
            if rec[0] > 9 {
                return Err(Error::format(i * RECORD_LEN, format!("label {} out of range 0..=9", rec[0])));
            }
            let planes = &rec[1..];
            let mut data = vec![0u8; PLANE * CHANNELS];
            for (p, px) in data.chunks_exact_mut(CHANNELS).enumerate() {
                for (c, v) in px.iter_mut().enumerate() {
                    *v = planes[c * PLANE + p];
                }
            }
            Ok(Cifar10Record {
                label: rec[0],
                image: Image::from_raw(SIDE, SIDE, data)?,
            })
        })
        .collect()
}

pub fn read_cifar10(path: impl AsRef<Path>) -> Result<Vec<Cifar10Record>> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_cifar10(&bytes)
}

pub fn encode_cifar10(records: &[Cifar10Record]) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(records.len() * RECORD_LEN);
    for r in records {
        if (r.image.width(), r.image.height()) != (SIDE, SIDE) || r.label > 9 {
            return Err(Error::InvalidArgument(format!(
                "record must be a 32x32 image with label 0..=9, got {}x{} label {}",
                r.image.width(),
                r.image.height(),
                r.label
            )));
        }
        out.push(r.label);
        for c in 0..CHANNELS {
            out.extend(r.image.as_raw().iter().skip(c).step_by(CHANNELS));
        }
    }
    Ok(out)
}

pub fn write_cifar10(path: impl AsRef<Path>, records: &[Cifar10Record]) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_cifar10(records)?).map_err(|e| Error::io(path, e))
}
