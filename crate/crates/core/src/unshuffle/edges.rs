use crate::error::{Error, Result};

use super::corners::CornerAssignment;
use super::tables::AdjacencyTables;

/// A row's right-edge and left-edge positions, chosen together from the
/// horizontal cross table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HorizontalPair {
    pub right: usize,
    pub left: usize,
}

/// A column's bottom-edge and top-edge positions, chosen together from the
/// vertical cross table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VerticalPair {
    pub bottom: usize,
    pub top: usize,
}

/// `h - 2` pairs per direction covering the non-corner edge cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePairing {
    pub horizontal: Vec<HorizontalPair>,
    pub vertical: Vec<VerticalPair>,
    /// Greedy selections whose minimum was shared by more than one pair.
    pub tied_selections: usize,
}

impl EdgePairing {
    /// Every position named by the pairing, horizontal pairs first.
    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.horizontal
            .iter()
            .flat_map(|p| [p.right, p.left])
            .chain(self.vertical.iter().flat_map(|p| [p.bottom, p.top]))
    }
}

/// Smallest `table(p, q)` over distinct unused `p`, `q`; ties go to the
/// smallest `(p, q)`. Returns the pair and whether the minimum was shared.
fn greedy_min(k: usize, used: &[bool], table: impl Fn(usize, usize) -> u64) -> ((usize, usize), bool) {
    let mut best = u64::MAX;
    let mut arg = (usize::MAX, usize::MAX);
    let mut tied = false;
    for p in (0..k).filter(|&p| !used[p]) {
        for q in (0..k).filter(|&q| q != p && !used[q]) {
            let v = table(p, q);
            if v < best {
                best = v;
                arg = (p, q);
                tied = false;
            } else if v == best {
                tied = true;
            }
        }
    }
    (arg, tied)
}

/// Greedy sequential argmin without replacement: first the horizontal table
/// for `h - 2` right/left pairs, then the vertical table for `h - 2`
/// bottom/top pairs. Corner positions are never candidates.
pub fn pair_edges(tables: &AdjacencyTables, corners: &CornerAssignment) -> Result<EdgePairing> {
    let k = tables.positions();
    let side = tables.side();
    let count = side.saturating_sub(2);
    let mut used = vec![false; k];
    for c in corners.as_array() {
        if c >= k {
            return Err(Error::InvalidArgument(format!("corner position {c} out of range 0..{k}")));
        }
        used[c] = true;
    }
    let mut tied_selections = 0;

    let available = |used: &[bool]| used.iter().filter(|u| !**u).count();
    let free = available(&used);
    if free < 2 * count {
        return Err(Error::PairingExhausted {
            needed: 2 * count,
            available: free,
        });
    }
    let mut horizontal = Vec::with_capacity(count);
    for _ in 0..count {
        let ((right, left), tied) = greedy_min(k, &used, |p, q| tables.horizontal(p, q));
        tied_selections += tied as usize;
        used[right] = true;
        used[left] = true;
        horizontal.push(HorizontalPair { right, left });
    }

    let free = available(&used);
    if free < 2 * count {
        return Err(Error::PairingExhausted {
            needed: 2 * count,
            available: free,
        });
    }
    let mut vertical = Vec::with_capacity(count);
    for _ in 0..count {
        let ((bottom, top), tied) = greedy_min(k, &used, |p, q| tables.vertical(p, q));
        tied_selections += tied as usize;
        used[bottom] = true;
        used[top] = true;
        vertical.push(VerticalPair { bottom, top });
    }

    Ok(EdgePairing {
        horizontal,
        vertical,
        tied_selections,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::Image;
    use crate::unshuffle::corners::solve_corners;
    use crate::unshuffle::tables::build_cross_tables;

    fn gradient(w: usize, h: usize) -> Image {
        Image::from_fn(w, h, |x, y| [(x * 6) as u8, (y * 6) as u8, ((2 * x + y) * 2) as u8]).unwrap()
    }

    #[test]
    fn h3_identity_gradient_single_pair() {
        let img = gradient(36, 36);
        let t = build_cross_tables(&img, 6).unwrap();
        let corners = solve_corners(&t).unwrap();
        assert_eq!(corners, CornerAssignment::new(0, 2, 6, 8).unwrap());

        // Oracle: enumerate every pair of free positions.
        let free: Vec<usize> = (0..9).filter(|p| ![0, 2, 6, 8].contains(p)).collect();
        let mut scored = Vec::new();
        for &p in &free {
            for &q in free.iter().filter(|&&q| q != p) {
                scored.push((t.horizontal(p, q), p, q));
            }
        }
        scored.sort();
        assert!(scored[0].0 < scored[1].0);
        // (3,2) is raster 5, (1,2) is raster 3.
        assert_eq!((scored[0].1, scored[0].2), (5, 3));

        let pairs = pair_edges(&t, &corners).unwrap();
        assert_eq!(pairs.horizontal, vec![HorizontalPair { right: 5, left: 3 }]);
        assert_eq!(pairs.vertical, vec![VerticalPair { bottom: 7, top: 1 }]);
    }

    #[test]
    fn constant_image_falls_back_to_tie_order() {
        let img = Image::filled(32, 32, [50, 50, 50]).unwrap();
        let t = build_cross_tables(&img, 8).unwrap();
        let corners = solve_corners(&t).unwrap();
        assert_eq!(corners.as_array(), [3, 2, 1, 0]);
        let pairs = pair_edges(&t, &corners).unwrap();
        assert_eq!(pairs.horizontal.len(), 2);
        assert_eq!(pairs.vertical.len(), 2);
        assert_eq!(pairs.horizontal[0], HorizontalPair { right: 4, left: 5 });
        assert_eq!(pairs.horizontal[1], HorizontalPair { right: 6, left: 7 });
        assert_eq!(pairs.vertical[0], VerticalPair { bottom: 8, top: 9 });
        assert_eq!(pairs.tied_selections, 4);
    }

    #[test]
    fn pairs_are_disjoint_from_corners_and_each_other() {
        let img = Image::from_fn(64, 64, |x, y| {
            let v = ((x as f64 / 9.0).sin() * 90.0 + (y as f64 / 13.0).cos() * 60.0 + 128.0) as u8;
            [v, v / 2 + (x as u8), 255 - v]
        })
        .unwrap();
        let t = build_cross_tables(&img, 16).unwrap();
        let corners = solve_corners(&t).unwrap();
        let pairs = pair_edges(&t, &corners).unwrap();
        assert_eq!(pairs.horizontal.len(), 6);
        assert_eq!(pairs.vertical.len(), 6);
        let mut all: Vec<usize> = corners.as_array().into_iter().chain(pairs.positions()).collect();
        let n = all.len();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), n);
    }

    #[test]
    fn h2_has_no_edges() {
        let img = gradient(8, 8);
        let t = build_cross_tables(&img, 4).unwrap();
        let pairs = pair_edges(&t, &solve_corners(&t).unwrap()).unwrap();
        assert!(pairs.horizontal.is_empty() && pairs.vertical.is_empty());
    }
}
