//! Block-wise perceptual encryption: a keyed permutation of `M`×`M` blocks
//! followed by one keyed pixel permutation shared by every `M/2`×`M/2`
//! sub-block and every colour channel.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::image::{BlockGeometry, Image, CHANNELS};
use crate::permutation::Permutation;

/// Default block size.
pub const DEFAULT_BLOCK_SIZE: usize = 16;

/// A secret key. `Identity` is a testing convenience that yields the
/// identity permutation at any length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Key {
    Seed(u64),
    Identity,
}

impl Key {
    pub fn permutation(self, len: usize) -> Result<Permutation> {
        match self {
            Key::Seed(seed) => Permutation::from_seed(seed, len),
            Key::Identity if len == 0 => {
                Err(Error::InvalidArgument("permutation length must be >= 1".into()))
            }
            Key::Identity => Ok(Permutation::identity(len)),
        }
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Key::Seed(s) => write!(f, "{s}"),
            Key::Identity => f.write_str("identity"),
        }
    }
}

impl FromStr for Key {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("identity") {
            return Ok(Key::Identity);
        }
        let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
            Some(hex) => u64::from_str_radix(hex, 16),
            None => s.parse(),
        };
        parsed
            .map(Key::Seed)
            .map_err(|_| Error::InvalidArgument(format!("bad key {s:?}: expected u64 or 'identity'")))
    }
}

impl From<u64> for Key {
    fn from(seed: u64) -> Self {
        Key::Seed(seed)
    }
}

/// `K1` drives the block permutation, `K2` the shared sub-block pixel shuffle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KeyPair {
    pub block: Key,
    pub pixel: Key,
}

impl KeyPair {
    pub fn new(block: impl Into<Key>, pixel: impl Into<Key>) -> Self {
        KeyPair {
            block: block.into(),
            pixel: pixel.into(),
        }
    }

    pub fn identity() -> Self {
        KeyPair {
            block: Key::Identity,
            pixel: Key::Identity,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CipherParams {
    pub block_size: usize,
    pub keys: KeyPair,
}

impl CipherParams {
    pub fn new(block_size: usize, keys: KeyPair) -> Self {
        CipherParams { block_size, keys }
    }
}

/// The two concrete permutations a [`CipherParams`] expands to for one
/// image geometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    pub geometry: BlockGeometry,
    /// Length `n`; block `i` moves to slot `blocks[i]`.
    pub blocks: Permutation,
    /// Length `(M/2)^2`; raster position `p` inside a sub-block moves to `pixels[p]`.
    pub pixels: Permutation,
}

impl Schedule {
    pub fn for_image(img: &Image, params: &CipherParams) -> Result<Self> {
        let geometry = BlockGeometry::exact(img, params.block_size)?;
        let half = geometry.half();
        Ok(Schedule {
            geometry,
            blocks: params.keys.block.permutation(geometry.block_count())?,
            pixels: params.keys.pixel.permutation(half * half)?,
        })
    }

    pub fn encrypt(&self, img: &Image) -> Result<Image> {
        let scrambled = permute_blocks(img, self.geometry.block_size(), &self.blocks)?;
        shuffle_subblock_pixels(&scrambled, self.geometry.block_size(), &self.pixels)
    }

    pub fn decrypt(&self, img: &Image) -> Result<Image> {
        let m = self.geometry.block_size();
        let unshuffled = shuffle_subblock_pixels(img, m, &self.pixels.inverse())?;
        permute_blocks(&unshuffled, m, &self.blocks.inverse())
    }
}

pub fn encrypt(img: &Image, params: &CipherParams) -> Result<Image> {
    Schedule::for_image(img, params)?.encrypt(img)
}

pub fn decrypt(img: &Image, params: &CipherParams) -> Result<Image> {
    Schedule::for_image(img, params)?.decrypt(img)
}

/// Block permutation only; pixels inside each block are untouched.
pub fn scramble_blocks_only(img: &Image, block_size: usize, key: Key) -> Result<Image> {
    let geom = BlockGeometry::exact(img, block_size)?;
    permute_blocks(img, block_size, &key.permutation(geom.block_count())?)
}

/// Moves block `i` (raster order) to slot `perm[i]`.
pub fn permute_blocks(img: &Image, block_size: usize, perm: &Permutation) -> Result<Image> {
    let geom = BlockGeometry::exact(img, block_size)?;
    if perm.len() != geom.block_count() {
        return Err(Error::InvalidArgument(format!(
            "block permutation has length {}, image has {} blocks",
            perm.len(),
            geom.block_count()
        )));
    }
    let row_len = block_size * CHANNELS;
    let src = img.as_raw();
    let stride = img.width() * CHANNELS;
    let mut out = img.clone();
    let dst = out.as_raw_mut();
    for i in 0..geom.block_count() {
        let (sx, sy) = geom.block_origin(i);
        let (dx, dy) = geom.block_origin(perm[i]);
        for r in 0..block_size {
            let s = (sy + r) * stride + sx * CHANNELS;
            let d = (dy + r) * stride + dx * CHANNELS;
            dst[d..d + row_len].copy_from_slice(&src[s..s + row_len]);
        }
    }
    Ok(out)
}

/// Applies `perm` (over raster positions of an `M/2`×`M/2` sub-block) to every
/// sub-block of every block, identically for all channels.
pub fn shuffle_subblock_pixels(
    img: &Image,
    block_size: usize,
    perm: &Permutation,
) -> Result<Image> {
    let geom = BlockGeometry::exact(img, block_size)?;
    let half = geom.half();
    if perm.len() != half * half {
        return Err(Error::InvalidArgument(format!(
            "pixel permutation has length {}, sub-blocks hold {} pixels",
            perm.len(),
            half * half
        )));
    }
    // Flat sample offsets of each sub-block position relative to its origin.
    let stride = img.width() * CHANNELS;
    let rel: Vec<usize> = (0..half * half)
        .map(|p| (p / half) * stride + (p % half) * CHANNELS)
        .collect();
    let src = img.as_raw();
    let mut out = img.clone();
    let dst = out.as_raw_mut();
    for sy in (0..img.height()).step_by(half) {
        for sx in (0..img.width()).step_by(half) {
            let base = sy * stride + sx * CHANNELS;
            for (p, &d) in perm.as_slice().iter().enumerate() {
                let s = base + rel[p];
                let t = base + rel[d];
                dst[t..t + CHANNELS].copy_from_slice(&src[s..s + CHANNELS]);
            }
        }
    }
    Ok(out)
}
