use crate::error::{Error, Result};

use super::tables::AdjacencyTables;

/// Shuffled positions that land on the four corners of a restored sub-block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CornerAssignment {
    pub upper_left: usize,
    pub upper_right: usize,
    pub lower_left: usize,
    pub lower_right: usize,
}

impl CornerAssignment {
    pub fn as_array(&self) -> [usize; 4] {
        [self.upper_left, self.upper_right, self.lower_left, self.lower_right]
    }

    /// Validates pairwise distinctness.
    pub fn new(upper_left: usize, upper_right: usize, lower_left: usize, lower_right: usize) -> Result<Self> {
        let c = CornerAssignment {
            upper_left,
            upper_right,
            lower_left,
            lower_right,
        };
        let a = c.as_array();
        for i in 0..4 {
            for j in i + 1..4 {
                if a[i] == a[j] {
                    return Err(Error::InvalidArgument(format!("corner positions repeat: {a:?}")));
                }
            }
        }
        Ok(c)
    }
}

/// Corner search result plus the data needed to judge its uniqueness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CornerSolution {
    pub corners: CornerAssignment,
    pub objective: u64,
    /// Number of ordered tuples attaining `objective` (1 when unique).
    pub optimal_tuples: u64,
}

/// Objective of one ordered tuple `(p1, p2, p3, p4)` read as
/// (lower-right, lower-left, upper-right, upper-left):
///
/// ```text
/// H(p1,p2) + V(p1,p3) + H(p3,p4) + V(p2,p4)
/// ```
///
/// Every term links two corners that touch across a quadrant boundary.
#[inline]
pub fn corner_objective(t: &AdjacencyTables, p1: usize, p2: usize, p3: usize, p4: usize) -> u64 {
    t.horizontal(p1, p2) + t.vertical(p1, p3) + t.horizontal(p3, p4) + t.vertical(p2, p4)
}

pub fn solve_corners(tables: &AdjacencyTables) -> Result<CornerAssignment> {
    solve_corners_detailed(tables).map(|s| s.corners)
}

/// Exhaustive search over all ordered 4-tuples of distinct positions. The
/// first tuple in lexicographic `(p1, p2, p3, p4)` order wins ties.
pub fn solve_corners_detailed(tables: &AdjacencyTables) -> Result<CornerSolution> {
    let k = tables.positions();
    if k < 4 {
        return Err(Error::InsufficientPositions(k));
    }
    let mut best = u64::MAX;
    let mut best_tuple = (0, 0, 0, 0);
    let mut ties = 0u64;

    for p1 in 0..k {
        let h1 = tables.horizontal_row(p1);
        let v1 = tables.vertical_row(p1);
        for p2 in 0..k {
            if p2 == p1 {
                continue;
            }
            let a = h1[p2];
            if a > best {
                continue;
            }
            let v2 = tables.vertical_row(p2);
            for p3 in 0..k {
                if p3 == p1 || p3 == p2 {
                    continue;
                }
                let b = a + v1[p3];
                if b > best {
                    continue;
                }
                let h3 = tables.horizontal_row(p3);
                for p4 in 0..k {
                    if p4 == p1 || p4 == p2 || p4 == p3 {
                        continue;
                    }
                    let total = b + h3[p4] + v2[p4];
                    if total < best {
                        best = total;
                        best_tuple = (p1, p2, p3, p4);
                        ties = 1;
                    } else if total == best {
                        ties += 1;
                    }
                }
            }
        }
    }

    let (p1, p2, p3, p4) = best_tuple;
    Ok(CornerSolution {
        corners: CornerAssignment {
            upper_left: p4,
            upper_right: p3,
            lower_left: p2,
            lower_right: p1,
        },
        objective: best,
        optimal_tuples: ties,
    })
}
