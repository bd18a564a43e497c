//! Keyless recovery of the shared sub-block pixel permutation.
//!
//! Pixels on facing edges of neighbouring quadrants are strongly correlated
//! in natural images, and every quadrant of every block was shuffled with
//! the same permutation. Summing squared differences over the whole image
//! therefore exposes which shuffled positions sit on which edge:
//!
//! 1. [`build_cross_tables`] aggregates the cross-quadrant costs.
//! 2. [`solve_corners`] finds the four corner positions by exhaustive search.
//! 3. [`pair_edges`] greedily pairs right/left and bottom/top edge positions.
//! 4. [`order_and_fill`] orders the edges and fills the interior using
//!    within-sub-block similarity.
//! 5. [`restore_subblocks`] applies the recovered placement.

mod corners;
mod edges;
mod fill;
mod tables;

use std::fmt::Write as _;

pub use corners::{corner_objective, solve_corners, solve_corners_detailed, CornerAssignment, CornerSolution};
pub use edges::{pair_edges, EdgePairing, HorizontalPair, VerticalPair};
pub use fill::{order_and_fill, order_and_fill_traced, FillDiagnostics, SubBlockPlacement};
pub use tables::{build_cross_tables, build_within_tables, AdjacencyTables, WithinTables};

use crate::cipher::shuffle_subblock_pixels;
use crate::error::{Error, Result};
use crate::image::{BlockGeometry, Image};

/// Everything stage 1 decided for one image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recovery {
    pub corners: CornerSolution,
    pub edges: EdgePairing,
    pub placement: SubBlockPlacement,
    pub fill: FillDiagnostics,
    pub table_ranges: [(u64, u64); 2],
}

impl Recovery {
    /// True when no greedy or exhaustive step had to break a tie.
    pub fn argmins_unique(&self) -> bool {
        self.corners.optimal_tuples == 1
            && self.edges.tied_selections == 0
            && self.fill.chain_ties == 0
            && self.fill.fill_ties == 0
    }

    /// Text dump: `#` header lines with statistics, then the placement.
    pub fn to_report(&self) -> String {
        let mut out = String::new();
        let [(hlo, hhi), (vlo, vhi)] = self.table_ranges;
        let _ = writeln!(out, "# side={}", self.placement.side());
        let _ = writeln!(out, "# horizontal_table_min={hlo} horizontal_table_max={hhi}");
        let _ = writeln!(out, "# vertical_table_min={vlo} vertical_table_max={vhi}");
        let _ = writeln!(
            out,
            "# corner_objective={} corner_optimal_tuples={}",
            self.corners.objective, self.corners.optimal_tuples
        );
        let _ = writeln!(
            out,
            "# edge_ties={} chain_ties={} fill_ties={}",
            self.edges.tied_selections, self.fill.chain_ties, self.fill.fill_ties
        );
        let _ = writeln!(
            out,
            "# right_chain_disagreements={} bottom_chain_disagreements={}",
            self.fill.right_chain_disagreements, self.fill.bottom_chain_disagreements
        );
        out.push_str(&self.placement.to_report());
        out
    }
}

/// Runs steps 1-4 on an encrypted image.
pub fn recover_placement(img: &Image, block_size: usize) -> Result<Recovery> {
    let cross = build_cross_tables(img, block_size)?;
    let within = build_within_tables(img, block_size)?;
    let corners = solve_corners_detailed(&cross)?;
    let edges = pair_edges(&cross, &corners.corners)?;
    let (placement, fill) = order_and_fill_traced(&within, &corners.corners, &edges)?;
    Ok(Recovery {
        corners,
        edges,
        placement,
        fill,
        table_ranges: cross.ranges(),
    })
}

/// Applies a complete placement to every sub-block of every block.
pub fn restore_subblocks(img: &Image, placement: &SubBlockPlacement, block_size: usize) -> Result<Image> {
    let geom = BlockGeometry::exact(img, block_size)?;
    if placement.side() != geom.half() {
        return Err(Error::Geometry(format!(
            "placement side {} does not match sub-block side {}",
            placement.side(),
            geom.half()
        )));
    }
    shuffle_subblock_pixels(img, block_size, &placement.to_permutation()?)
}

/// Full stage 1: recover the placement and apply it.
pub fn unshuffle(img: &Image, block_size: usize) -> Result<(Image, Recovery)> {
    let recovery = recover_placement(img, block_size)?;
    let restored = restore_subblocks(img, &recovery.placement, block_size)?;
    Ok((restored, recovery))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cipher::{encrypt, CipherParams, Key, KeyPair};
    use crate::permutation::{make_permutation, Permutation};

    /// Low-frequency, non-collinear per-channel content.
    fn smooth(w: usize, h: usize, phase: f64) -> Image {
        Image::from_fn(w, h, |x, y| {
            let (x, y) = (x as f64, y as f64);
            let r = 128.0 + 90.0 * (x / 23.0 + phase).sin();
            let g = 128.0 + 90.0 * (y / 19.0 - phase).cos();
            let b = 128.0 + 60.0 * ((x + y) / 29.0 + 2.0 * phase).sin();
            [r.round() as u8, g.round() as u8, b.round() as u8]
        })
        .unwrap()
    }

    #[test]
    fn identity_shuffle_recovers_identity() {
        let img = smooth(128, 128, 0.3);
        let rec = recover_placement(&img, 16).unwrap();
        assert!(rec.placement.to_permutation().unwrap().is_identity(), "{}", rec.to_report());
    }

    #[test]
    fn known_shuffle_is_inverted() {
        let img = smooth(128, 128, 1.1);
        let pi = make_permutation(1234, 64).unwrap();
        let shuffled = shuffle_subblock_pixels(&img, 16, &pi).unwrap();
        let rec = recover_placement(&shuffled, 16).unwrap();
        assert_eq!(rec.placement.to_permutation().unwrap(), pi.inverse());
        assert_eq!(restore_subblocks(&shuffled, &rec.placement, 16).unwrap(), img);
    }

    #[test]
    fn true_inverse_gives_block_scrambled_image() {
        let img = smooth(64, 64, 0.0);
        let params = CipherParams::new(16, KeyPair::new(8, 9));
        let enc = encrypt(&img, &params).unwrap();
        let k2 = Key::Seed(9).permutation(64).unwrap();
        let placement = SubBlockPlacement::from_shuffle(8, &k2).unwrap();
        let expect = crate::cipher::scramble_blocks_only(&img, 16, Key::Seed(8)).unwrap();
        assert_eq!(restore_subblocks(&enc, &placement, 16).unwrap(), expect);

        let ident = SubBlockPlacement::from_shuffle(8, &Permutation::identity(64)).unwrap();
        assert_eq!(restore_subblocks(&enc, &ident, 16).unwrap(), enc);
    }

    #[test]
    fn end_to_end_with_identity_block_key() {
        let img = smooth(96, 96, 2.0);
        let params = CipherParams::new(16, KeyPair::new(Key::Identity, 555));
        let enc = encrypt(&img, &params).unwrap();
        let (restored, _) = unshuffle(&enc, 16).unwrap();
        assert_eq!(restored, img);
    }

    #[test]
    fn incomplete_placement_is_rejected() {
        let img = smooth(32, 32, 0.0);
        let p = SubBlockPlacement::empty(8);
        assert!(matches!(restore_subblocks(&img, &p, 16), Err(Error::Incomplete(_))));
        let small = SubBlockPlacement::from_shuffle(4, &Permutation::identity(16)).unwrap();
        assert!(matches!(restore_subblocks(&img, &small, 16), Err(Error::Geometry(_))));
    }

    #[test]
    fn report_parses_back() {
        let img = smooth(64, 64, 0.7);
        let rec = recover_placement(&img, 8).unwrap();
        let text = rec.to_report();
        assert!(text.lines().next().unwrap().starts_with("# side=4"));
        assert_eq!(SubBlockPlacement::parse_report(4, &text).unwrap(), rec.placement);
    }
}
