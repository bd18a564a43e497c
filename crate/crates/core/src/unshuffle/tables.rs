use crate::error::{Error, Result};
use crate::image::{BlockGeometry, Image, Quadrant, SubBlockIndex, CHANNELS};

/// Cross-sub-block squared-difference tables, summed over every block and
/// channel of one attacked image.
///
/// `horizontal[p1][p2]` compares position `p1` of the left quadrants (UL, LL)
/// with position `p2` of the right quadrants (UR, LR); a low value suggests
/// `p1` sits on the right edge of a sub-block and `p2` on the left edge of the
/// same row. `vertical[p3][p4]` does the same for upper (UL, UR) against lower
/// (LL, LR) quadrants: `p3` on the bottom row, `p4` on the top row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyTables {
    side: usize,
    horizontal: Vec<u64>,
    vertical: Vec<u64>,
}

impl AdjacencyTables {
    /// Builds tables directly from row-major `side²×side²` matrices.
    pub fn from_matrices(side: usize, horizontal: Vec<u64>, vertical: Vec<u64>) -> Result<Self> {
        let len = side * side * side * side;
        if side == 0 || horizontal.len() != len || vertical.len() != len {
            return Err(Error::InvalidArgument(format!(
                "tables for side {side} need {len} entries each"
            )));
        }
        Ok(AdjacencyTables {
            side,
            horizontal,
            vertical,
        })
    }

    /// Sub-block side `h`.
    pub fn side(&self) -> usize {
        self.side
    }

    /// Positions per sub-block, `h²`.
    pub fn positions(&self) -> usize {
        self.side * self.side
    }

    #[inline]
    pub fn horizontal(&self, p1: usize, p2: usize) -> u64 {
        self.horizontal[p1 * self.positions() + p2]
    }

    #[inline]
    pub fn vertical(&self, p3: usize, p4: usize) -> u64 {
        self.vertical[p3 * self.positions() + p4]
    }

    pub(crate) fn horizontal_row(&self, p1: usize) -> &[u64] {
        let k = self.positions();
        &self.horizontal[p1 * k..(p1 + 1) * k]
    }

    pub(crate) fn vertical_row(&self, p3: usize) -> &[u64] {
        let k = self.positions();
        &self.vertical[p3 * k..(p3 + 1) * k]
    }

    /// Smallest and largest entry of each table.
    pub fn ranges(&self) -> [(u64, u64); 2] {
        let range = |t: &[u64]| {
            t.iter()
                .fold((u64::MAX, 0), |(lo, hi), &v| (lo.min(v), hi.max(v)))
        };
        [range(&self.horizontal), range(&self.vertical)]
    }
}

/// Squared differences between positions of the same sub-block, summed over
/// every sub-block and channel.
///
/// The raw sum is symmetric, so "q right of p" and "q below p" read the same
/// matrix; the two accessors keep call sites explicit about which relation
/// they mean.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WithinTables {
    side: usize,
    pairwise: Vec<u64>,
}

impl WithinTables {
    pub fn from_matrix(side: usize, pairwise: Vec<u64>) -> Result<Self> {
        let len = side * side * side * side;
        if side == 0 || pairwise.len() != len {
            return Err(Error::InvalidArgument(format!(
                "within table for side {side} needs {len} entries"
            )));
        }
        Ok(WithinTables { side, pairwise })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn positions(&self) -> usize {
        self.side * self.side
    }

    /// Cost of placing `q` immediately right of `p`.
    #[inline]
    pub fn horizontal(&self, p: usize, q: usize) -> u64 {
        self.pairwise[p * self.positions() + q]
    }

    /// Cost of placing `q` immediately below `p`.
    #[inline]
    pub fn vertical(&self, p: usize, q: usize) -> u64 {
        self.pairwise[p * self.positions() + q]
    }
}

/// Gathers the samples of one sub-block, position-major, as `i32`.
fn gather(img: &Image, geom: &BlockGeometry, idx: SubBlockIndex, out: &mut Vec<i32>) {
    let half = geom.half();
    let (ox, oy) = idx.origin(geom);
    let stride = img.width() * CHANNELS;
    let raw = img.as_raw();
    out.clear();
    for y in 0..half {
        let row = (oy + y) * stride + ox * CHANNELS;
        out.extend(raw[row..row + half * CHANNELS].iter().map(|&v| v as i32));
    }
}

#[inline]
fn sq_dist(a: &[i32], b: &[i32]) -> u64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            (d * d) as u64
        })
        .sum()
}

/// `build_cross_tables`: exact integer accumulation of the two
/// cross-quadrant tables.
pub fn build_cross_tables(img: &Image, block_size: usize) -> Result<AdjacencyTables> {
    let geom = BlockGeometry::exact(img, block_size)?;
    let side = geom.half();
    let k = side * side;
    let mut horizontal = vec![0u64; k * k];
    let mut vertical = vec![0u64; k * k];
    let mut quads: [Vec<i32>; 4] = Default::default();

    for block in 0..geom.block_count() {
        for (buf, quadrant) in quads.iter_mut().zip(Quadrant::ALL) {
            gather(img, &geom, SubBlockIndex { block, quadrant }, buf);
        }
        let [ul, ur, ll, lr] = &quads;
        for p1 in 0..k {
            let a = p1 * CHANNELS..(p1 + 1) * CHANNELS;
            let (ul1, ur1, ll1) = (&ul[a.clone()], &ur[a.clone()], &ll[a]);
            let hrow = &mut horizontal[p1 * k..(p1 + 1) * k];
            let vrow = &mut vertical[p1 * k..(p1 + 1) * k];
            for p2 in 0..k {
                let b = p2 * CHANNELS..(p2 + 1) * CHANNELS;
                hrow[p2] += sq_dist(ul1, &ur[b.clone()]) + sq_dist(ll1, &lr[b.clone()]);
                vrow[p2] += sq_dist(ul1, &ll[b.clone()]) + sq_dist(ur1, &lr[b]);
            }
        }
    }
    AdjacencyTables::from_matrices(side, horizontal, vertical)
}

/// Pairwise within-sub-block table over all `m` sub-blocks.
pub fn build_within_tables(img: &Image, block_size: usize) -> Result<WithinTables> {
    let geom = BlockGeometry::exact(img, block_size)?;
    let side = geom.half();
    let k = side * side;
    let mut pairwise = vec![0u64; k * k];
    let mut buf = Vec::with_capacity(k * CHANNELS);

    for block in 0..geom.block_count() {
        for quadrant in Quadrant::ALL {
            gather(img, &geom, SubBlockIndex { block, quadrant }, &mut buf);
            for p in 0..k {
                let a = &buf[p * CHANNELS..(p + 1) * CHANNELS];
                for q in p + 1..k {
                    pairwise[p * k + q] += sq_dist(a, &buf[q * CHANNELS..(q + 1) * CHANNELS]);
                }
            }
        }
    }
    for p in 0..k {
        for q in p + 1..k {
            pairwise[q * k + p] = pairwise[p * k + q];
        }
    }
    WithinTables::from_matrix(side, pairwise)
}
