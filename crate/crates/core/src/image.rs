//! RGB image carrier and the block / sub-block geometry the cipher works on.
//!
//! Everything is 0-based and enumerated in raster order: blocks left-to-right
//! then top-to-bottom, pixels inside a block or sub-block likewise.

use crate::error::{Error, Result};

/// Number of interleaved channels per pixel (R, G, B).
pub const CHANNELS: usize = 3;

/// An 8-bit RGB image stored row-major with interleaved channels.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Image {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl std::fmt::Debug for Image {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Image")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish_non_exhaustive()
    }
}

impl Image {
    /// Black image of the given size.
    pub fn new(width: usize, height: usize) -> Result<Self> {
        Self::filled(width, height, [0, 0, 0])
    }

    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Result<Self> {
        check_dims(width, height)?;
        let data = rgb.iter().copied().cycle().take(width * height * CHANNELS).collect();
        Ok(Image {
            width,
            height,
            data,
        })
    }

    pub fn from_raw(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        check_dims(width, height)?;
        let expected = width * height * CHANNELS;
        if data.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "{width}x{height} image needs {expected} samples, got {}",
                data.len()
            )));
        }
        Ok(Image {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> [u8; 3],
    ) -> Result<Self> {
        check_dims(width, height)?;
        let mut data = Vec::with_capacity(width * height * CHANNELS);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Ok(Image {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn as_raw(&self) -> &[u8] {
        &self.data
    }

    pub fn as_raw_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    pub fn into_raw(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    fn offset(&self, x: usize, y: usize) -> usize {
        (y * self.width + x) * CHANNELS
    }

    /// Panics when `(x, y)` is out of bounds.
    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        assert!(x < self.width && y < self.height, "pixel ({x},{y}) out of bounds");
        let o = self.offset(x, y);
        [self.data[o], self.data[o + 1], self.data[o + 2]]
    }

    #[inline]
    pub fn set_pixel(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        assert!(x < self.width && y < self.height, "pixel ({x},{y}) out of bounds");
        let o = self.offset(x, y);
        self.data[o..o + CHANNELS].copy_from_slice(&rgb);
    }

    /// Copy of the `w`×`h` window whose top-left corner is `(x, y)`.
    pub fn crop(&self, x: usize, y: usize, w: usize, h: usize) -> Result<Image> {
        check_dims(w, h)?;
        if x + w > self.width || y + h > self.height {
            return Err(Error::Geometry(format!(
                "crop {w}x{h} at ({x},{y}) exceeds {}x{} image",
                self.width, self.height
            )));
        }
        let mut data = Vec::with_capacity(w * h * CHANNELS);
        for row in y..y + h {
            let start = self.offset(x, row);
            data.extend_from_slice(&self.data[start..start + w * CHANNELS]);
        }
        Ok(Image {
            width: w,
            height: h,
            data,
        })
    }

    /// Paste `src` with its top-left corner at `(x, y)`.
    pub fn paste(&mut self, src: &Image, x: usize, y: usize) -> Result<()> {
        if x + src.width > self.width || y + src.height > self.height {
            return Err(Error::Geometry(format!(
                "paste {}x{} at ({x},{y}) exceeds {}x{} image",
                src.width, src.height, self.width, self.height
            )));
        }
        let row_len = src.width * CHANNELS;
        for row in 0..src.height {
            let dst = self.offset(x, y + row);
            let s = row * row_len;
            self.data[dst..dst + row_len].copy_from_slice(&src.data[s..s + row_len]);
        }
        Ok(())
    }

    /// Per-channel intensity histograms.
    pub fn channel_histograms(&self) -> [[u64; 256]; 3] {
        let mut hist = [[0u64; 256]; 3];
        for px in self.data.chunks_exact(CHANNELS) {
            for (c, &v) in px.iter().enumerate() {
                hist[c][v as usize] += 1;
            }
        }
        hist
    }

    /// Sample-wise `255 - v`.
    pub fn inverted(&self) -> Image {
        Image {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|v| 255 - v).collect(),
        }
    }
}

fn check_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidArgument(format!(
            "image dimensions must be positive, got {width}x{height}"
        )));
    }
    Ok(())
}

/// How an image of a given size is tiled into `M`×`M` blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockGeometry {
    block_size: usize,
    cols: usize,
    rows: usize,
}

impl BlockGeometry {
    /// Tiling with floor semantics: trailing pixels past the last full block
    /// are not covered.
    pub fn new(width: usize, height: usize, block_size: usize) -> Result<Self> {
        if block_size < 2 || block_size % 2 != 0 {
            return Err(Error::Geometry(format!(
                "block size must be even and >= 2, got {block_size}"
            )));
        }
        if width < block_size || height < block_size {
            return Err(Error::Geometry(format!(
                "{width}x{height} image is smaller than one {block_size}x{block_size} block"
            )));
        }
        Ok(BlockGeometry {
            block_size,
            cols: width / block_size,
            rows: height / block_size,
        })
    }

    pub fn of(img: &Image, block_size: usize) -> Result<Self> {
        Self::new(img.width(), img.height(), block_size)
    }

    /// Like [`BlockGeometry::of`] but also requires the block size to divide
    /// both image dimensions.
    pub fn exact(img: &Image, block_size: usize) -> Result<Self> {
        let geom = Self::of(img, block_size)?;
        if img.width() % block_size != 0 || img.height() % block_size != 0 {
            return Err(Error::Geometry(format!(
                "{}x{} image is not a multiple of block size {block_size}",
                img.width(),
                img.height()
            )));
        }
        Ok(geom)
    }

    /// Block side `M`.
    pub fn block_size(&self) -> usize {
        self.block_size
    }

    /// Sub-block side `M / 2`.
    pub fn half(&self) -> usize {
        self.block_size / 2
    }

    /// Blocks per row.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Blocks per column.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of blocks `n`.
    pub fn block_count(&self) -> usize {
        self.cols * self.rows
    }

    /// Number of sub-blocks `m = 4n`.
    pub fn subblock_count(&self) -> usize {
        4 * self.block_count()
    }

    /// Width in pixels of the covered area.
    pub fn covered_width(&self) -> usize {
        self.cols * self.block_size
    }

    pub fn covered_height(&self) -> usize {
        self.rows * self.block_size
    }

    /// Pixel coordinates of the top-left corner of block `index`.
    pub fn block_origin(&self, index: usize) -> (usize, usize) {
        (
            (index % self.cols) * self.block_size,
            (index / self.cols) * self.block_size,
        )
    }
}

/// One of the four quadrants of a block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quadrant {
    UpperLeft,
    UpperRight,
    LowerLeft,
    LowerRight,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [
        Quadrant::UpperLeft,
        Quadrant::UpperRight,
        Quadrant::LowerLeft,
        Quadrant::LowerRight,
    ];

    /// Offset of the quadrant inside its block, in sub-block units.
    pub fn offset(self) -> (usize, usize) {
        match self {
            Quadrant::UpperLeft => (0, 0),
            Quadrant::UpperRight => (1, 0),
            Quadrant::LowerLeft => (0, 1),
            Quadrant::LowerRight => (1, 1),
        }
    }
}

/// Addresses a single sub-block: block index plus quadrant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubBlockIndex {
    pub block: usize,
    pub quadrant: Quadrant,
}

impl SubBlockIndex {
    /// Top-left pixel of this sub-block in an image tiled by `geom`.
    pub fn origin(&self, geom: &BlockGeometry) -> (usize, usize) {
        let (bx, by) = geom.block_origin(self.block);
        let (qx, qy) = self.quadrant.offset();
        (bx + qx * geom.half(), by + qy * geom.half())
    }
}

/// Cut the image into its `n` blocks in raster order.
pub fn split_blocks(img: &Image, geom: &BlockGeometry) -> Result<Vec<Image>> {
    let m = geom.block_size();
    if img.width() < geom.covered_width() || img.height() < geom.covered_height() {
        return Err(Error::Geometry(format!(
            "{}x{} image cannot hold a {}x{} grid of {m}px blocks",
            img.width(),
            img.height(),
            geom.cols(),
            geom.rows()
        )));
    }
    (0..geom.block_count())
        .map(|i| {
            let (x, y) = geom.block_origin(i);
            img.crop(x, y, m, m)
        })
        .collect()
}

/// Inverse of [`split_blocks`]; the result covers exactly the block grid.
pub fn merge_blocks(blocks: &[Image], geom: &BlockGeometry) -> Result<Image> {
    if blocks.len() != geom.block_count() {
        return Err(Error::Geometry(format!(
            "expected {} blocks, got {}",
            geom.block_count(),
            blocks.len()
        )));
    }
    let m = geom.block_size();
    let mut out = Image::new(geom.covered_width(), geom.covered_height())?;
    for (i, block) in blocks.iter().enumerate() {
        if block.width() != m || block.height() != m {
            return Err(Error::Geometry(format!(
                "block {i} is {}x{}, expected {m}x{m}",
                block.width(),
                block.height()
            )));
        }
        let (x, y) = geom.block_origin(i);
        out.paste(block, x, y)?;
    }
    Ok(out)
}

/// Split an `M`×`M` block into its UL, UR, LL, LR quadrants.
pub fn split_subblocks(block: &Image) -> Result<[Image; 4]> {
    let m = block.width();
    if block.height() != m {
        return Err(Error::Geometry(format!(
            "block must be square, got {}x{}",
            block.width(),
            block.height()
        )));
    }
    if m % 2 != 0 {
        return Err(Error::Geometry(format!("block side {m} is odd")));
    }
    let h = m / 2;
    Ok([
        block.crop(0, 0, h, h)?,
        block.crop(h, 0, h, h)?,
        block.crop(0, h, h, h)?,
        block.crop(h, h, h, h)?,
    ])
}

/// Reassemble a block from quadrants given in UL, UR, LL, LR order.
pub fn merge_subblocks(quadrants: &[Image; 4]) -> Result<Image> {
    let h = quadrants[0].width();
    if quadrants.iter().any(|q| q.width() != h || q.height() != h) {
        return Err(Error::Geometry("quadrants must be equal squares".into()));
    }
    let mut block = Image::new(2 * h, 2 * h)?;
    for (q, quadrant) in quadrants.iter().zip(Quadrant::ALL) {
        let (ox, oy) = quadrant.offset();
        block.paste(q, ox * h, oy * h)?;
    }
    Ok(block)
}
