use std::str::FromStr;

use crate::error::{Error, Result};
use crate::image::CHANNELS;

use super::pieces::PieceSet;

/// Where piece `b` sits relative to piece `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Right,
    Left,
    Below,
    Above,
}

impl Relation {
    pub const ALL: [Relation; 4] = [Relation::Right, Relation::Left, Relation::Below, Relation::Above];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn opposite(self) -> Relation {
        match self {
            Relation::Right => Relation::Left,
            Relation::Left => Relation::Right,
            Relation::Below => Relation::Above,
            Relation::Above => Relation::Below,
        }
    }

    /// Board offset `(dx, dy)` from `a` to `b`.
    pub fn offset(self) -> (isize, isize) {
        match self {
            Relation::Right => (1, 0),
            Relation::Left => (-1, 0),
            Relation::Below => (0, 1),
            Relation::Above => (0, -1),
        }
    }
}

/// Colour space the border differences are measured in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Metric {
    /// CIE L*a*b* (sRGB, D65).
    #[default]
    Lab,
    Rgb,
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lab" => Ok(Metric::Lab),
            "rgb" => Ok(Metric::Rgb),
            other => Err(Error::InvalidArgument(format!("unknown metric {other:?} (lab|rgb)"))),
        }
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Metric::Lab => "lab",
            Metric::Rgb => "rgb",
        })
    }
}

fn srgb_to_linear(v: u8) -> f64 {
    let c = v as f64 / 255.0;
    if c <= 0.04045 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

fn lab_f(t: f64) -> f64 {
    const DELTA: f64 = 6.0 / 29.0;
    if t > DELTA * DELTA * DELTA {
        t.cbrt()
    } else {
        t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
    }
}

/// sRGB → CIE L*a*b* under D65.
pub fn rgb_to_lab(rgb: [u8; 3]) -> [f64; 3] {
    let [r, g, b] = rgb.map(srgb_to_linear);
    let x = 0.412_456_4 * r + 0.357_576_1 * g + 0.180_437_5 * b;
    let y = 0.212_672_9 * r + 0.715_152_2 * g + 0.072_175_0 * b;
    let z = 0.019_333_9 * r + 0.119_192_0 * g + 0.950_304_1 * b;
    let (fx, fy, fz) = (lab_f(x / 0.950_47), lab_f(y), lab_f(z / 1.088_83));
    [116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)]
}

/// The four one-pixel borders of a piece, converted to the metric's space.
struct Borders {
    top: Vec<f64>,
    bottom: Vec<f64>,
    left: Vec<f64>,
    right: Vec<f64>,
}

fn borders(pieces: &PieceSet, metric: Metric) -> Vec<Borders> {
    let s = pieces.side();
    let convert = |px: [u8; 3]| -> [f64; 3] {
        match metric {
            Metric::Lab => rgb_to_lab(px),
            Metric::Rgb => px.map(f64::from),
        }
    };
    let line = |img: &crate::image::Image, coords: &mut dyn Iterator<Item = (usize, usize)>| -> Vec<f64> {
        let mut v = Vec::with_capacity(s * CHANNELS);
        for (x, y) in coords {
            v.extend_from_slice(&convert(img.pixel(x, y)));
        }
        v
    };
    pieces
        .pieces()
        .iter()
        .map(|img| Borders {
            top: line(img, &mut (0..s).map(|x| (x, 0))),
            bottom: line(img, &mut (0..s).map(|x| (x, s - 1))),
            left: line(img, &mut (0..s).map(|y| (0, y))),
            right: line(img, &mut (0..s).map(|y| (s - 1, y))),
        })
        .collect()
}

fn ssd(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

const NO_BUDDY: u32 = u32::MAX;

/// Pairwise border dissimilarities with per-(piece, relation) rankings and
/// best-buddy links.
#[derive(Clone, Debug)]
pub struct CompatibilityTable {
    n: usize,
    /// `right[a * n + b]`: b placed right of a.
    right: Vec<f64>,
    /// `below[a * n + b]`: b placed below a.
    below: Vec<f64>,
    /// For each `(a, rel)`, the other pieces sorted by ascending dissimilarity.
    ranked: Vec<u32>,
    buddies: Vec<u32>,
}

impl CompatibilityTable {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Dissimilarity of placing `b` at `rel` of `a`.
    #[inline]
    pub fn get(&self, a: usize, b: usize, rel: Relation) -> f64 {
        match rel {
            Relation::Right => self.right[a * self.n + b],
            Relation::Left => self.right[b * self.n + a],
            Relation::Below => self.below[a * self.n + b],
            Relation::Above => self.below[b * self.n + a],
        }
    }

    /// Candidates for `rel` of `a`, best first (never contains `a`).
    #[inline]
    pub fn ranked(&self, a: usize, rel: Relation) -> &[u32] {
        let w = self.n - 1;
        let start = (a * 4 + rel.index()) * w;
        &self.ranked[start..start + w]
    }

    /// `b` such that `b` is `a`'s top choice at `rel` and `a` is `b`'s top
    /// choice at the opposite relation.
    #[inline]
    pub fn best_buddy(&self, a: usize, rel: Relation) -> Option<usize> {
        match self.buddies[a * 4 + rel.index()] {
            NO_BUDDY => None,
            b => Some(b as usize),
        }
    }

    /// Share of `(piece, relation)` slots that have a best buddy.
    pub fn buddy_ratio(&self) -> f64 {
        let with = self.buddies.iter().filter(|&&b| b != NO_BUDDY).count();
        with as f64 / self.buddies.len().max(1) as f64
    }
}

/// `build_compatibility` with the default Lab metric.
pub fn build_compatibility(pieces: &PieceSet) -> Result<CompatibilityTable> {
    build_compatibility_with(pieces, Metric::Lab)
}

pub fn build_compatibility_with(pieces: &PieceSet, metric: Metric) -> Result<CompatibilityTable> {
    let n = pieces.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 pieces, got {n}")));
    }
    let b = borders(pieces, metric);
    let mut right = vec![0.0; n * n];
    let mut below = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            right[i * n + j] = ssd(&b[i].right, &b[j].left);
            below[i * n + j] = ssd(&b[i].bottom, &b[j].top);
        }
    }
    let mut table = CompatibilityTable {
        n,
        right,
        below,
        ranked: Vec::with_capacity(n * 4 * (n - 1)),
        buddies: vec![NO_BUDDY; n * 4],
    };
    for a in 0..n {
        for rel in Relation::ALL {
            let mut others: Vec<u32> = (0..n as u32).filter(|&o| o as usize != a).collect();
            others.sort_by(|&x, &y| {
                table
                    .get(a, x as usize, rel)
                    .total_cmp(&table.get(a, y as usize, rel))
                    .then(x.cmp(&y))
            });
            table.ranked.extend_from_slice(&others);
        }
    }
    for a in 0..n {
        for rel in Relation::ALL {
            let top = table.ranked(a, rel)[0] as usize;
            if table.ranked(top, rel.opposite())[0] as usize == a {
                table.buddies[a * 4 + rel.index()] = top as u32;
            }
        }
    }
    Ok(table)
}
