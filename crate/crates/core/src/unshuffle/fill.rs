use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::permutation::Permutation;

use super::corners::CornerAssignment;
use super::edges::EdgePairing;
use super::tables::WithinTables;

/// Map from restored coordinates to the shuffled position whose pixel
/// belongs there. Cells are indexed `y * side + x`, 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubBlockPlacement {
    side: usize,
    cells: Vec<Option<usize>>,
    taken: Vec<bool>,
}

impl SubBlockPlacement {
    pub fn empty(side: usize) -> Self {
        SubBlockPlacement {
            side,
            cells: vec![None; side * side],
            taken: vec![false; side * side],
        }
    }

    /// Placement that undoes a known shuffle: cell `r` takes shuffled
    /// position `shuffle[r]`.
    pub fn from_shuffle(side: usize, shuffle: &Permutation) -> Result<Self> {
        if shuffle.len() != side * side {
            return Err(Error::InvalidArgument(format!(
                "shuffle of length {} does not fit side {side}",
                shuffle.len()
            )));
        }
        let mut p = Self::empty(side);
        for (r, &pos) in shuffle.as_slice().iter().enumerate() {
            p.place(r % side, r / side, pos)?;
        }
        Ok(p)
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn get(&self, x: usize, y: usize) -> Option<usize> {
        self.cells[y * self.side + x]
    }

    pub fn cells(&self) -> &[Option<usize>] {
        &self.cells
    }

    pub fn is_taken(&self, position: usize) -> bool {
        self.taken[position]
    }

    /// Assigns `position` to cell `(x, y)`; keeps the map injective.
    pub fn place(&mut self, x: usize, y: usize, position: usize) -> Result<()> {
        let k = self.side * self.side;
        if x >= self.side || y >= self.side || position >= k {
            return Err(Error::InvalidArgument(format!(
                "cannot place position {position} at ({x},{y}) in a {0}x{0} sub-block",
                self.side
            )));
        }
        let cell = &mut self.cells[y * self.side + x];
        if cell.is_some() || self.taken[position] {
            return Err(Error::InvalidArgument(format!(
                "cell ({x},{y}) or position {position} already assigned"
            )));
        }
        *cell = Some(position);
        self.taken[position] = true;
        Ok(())
    }

    pub fn is_complete(&self) -> bool {
        self.cells.iter().all(Option::is_some)
    }

    /// Scatter permutation that restores a shuffled sub-block: shuffled
    /// position `p` moves to the raster index of the cell it was placed in.
    pub fn to_permutation(&self) -> Result<Permutation> {
        if !self.is_complete() {
            let missing = self.cells.iter().filter(|c| c.is_none()).count();
            return Err(Error::Incomplete(format!("placement has {missing} empty cells")));
        }
        let mut scatter = vec![0; self.cells.len()];
        for (r, c) in self.cells.iter().enumerate() {
            scatter[c.expect("complete")] = r;
        }
        Permutation::new(scatter)
    }

    /// One `x,y -> p` line per assigned cell, 1-based coordinates, raster order.
    pub fn to_report(&self) -> String {
        let mut out = String::new();
        for (r, c) in self.cells.iter().enumerate() {
            if let Some(p) = c {
                let _ = writeln!(out, "{},{} -> {}", r % self.side + 1, r / self.side + 1, p);
            }
        }
        out
    }

    /// Parses [`SubBlockPlacement::to_report`] output. Lines starting with
    /// `#` and blank lines are ignored.
    pub fn parse_report(side: usize, text: &str) -> Result<Self> {
        let mut p = Self::empty(side);
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || Error::Config {
                line: n + 1,
                message: format!("expected 'x,y -> p', got {line:?}"),
            };
            let (coord, pos) = line.split_once("->").ok_or_else(bad)?;
            let (x, y) = coord.trim().split_once(',').ok_or_else(bad)?;
            let x: usize = x.trim().parse().map_err(|_| bad())?;
            let y: usize = y.trim().parse().map_err(|_| bad())?;
            let pos: usize = pos.trim().parse().map_err(|_| bad())?;
            if x == 0 || y == 0 {
                return Err(bad());
            }
            p.place(x - 1, y - 1, pos)?;
        }
        Ok(p)
    }
}

/// Diagnostics from [`order_and_fill_traced`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FillDiagnostics {
    /// Greedy chain steps whose minimum was shared.
    pub chain_ties: usize,
    /// Interior cells whose minimum was shared.
    pub fill_ties: usize,
    /// Rows where an independent right-column chain from the upper-right
    /// corner disagrees with the inherited horizontal partner.
    pub right_chain_disagreements: usize,
    /// Columns where an independent bottom-row chain from the lower-left
    /// corner disagrees with the inherited vertical partner.
    pub bottom_chain_disagreements: usize,
}

/// Orders `candidates` by greedy nearest-neighbour chaining from `start`.
fn chain(start: usize, candidates: &[usize], cost: impl Fn(usize, usize) -> u64, ties: &mut usize) -> Vec<usize> {
    let mut remaining: Vec<usize> = candidates.to_vec();
    remaining.sort_unstable();
    let mut order = Vec::with_capacity(remaining.len());
    let mut current = start;
    while !remaining.is_empty() {
        let mut best = 0;
        let mut tied = false;
        for i in 1..remaining.len() {
            let (a, b) = (cost(current, remaining[i]), cost(current, remaining[best]));
            if a < b {
                best = i;
                tied = false;
            } else if a == b {
                tied = true;
            }
        }
        *ties += tied as usize;
        current = remaining.remove(best);
        order.push(current);
    }
    order
}

pub fn order_and_fill(
    tables: &WithinTables,
    corners: &CornerAssignment,
    pairs: &EdgePairing,
) -> Result<SubBlockPlacement> {
    order_and_fill_traced(tables, corners, pairs).map(|(p, _)| p)
}

/// Builds the full placement: corners, chained edges with inherited partners,
/// then interior cells in raster order by left + upper neighbour cost.
pub fn order_and_fill_traced(
    tables: &WithinTables,
    corners: &CornerAssignment,
    pairs: &EdgePairing,
) -> Result<(SubBlockPlacement, FillDiagnostics)> {
    let h = tables.side();
    if h < 2 {
        return Err(Error::InsufficientPositions(h * h));
    }
    let last = h - 1;
    let edge = h - 2;
    if pairs.horizontal.len() != edge || pairs.vertical.len() != edge {
        return Err(Error::InvalidArgument(format!(
            "need {edge} edge pairs per direction, got {} and {}",
            pairs.horizontal.len(),
            pairs.vertical.len()
        )));
    }
    let mut diag = FillDiagnostics::default();
    let mut out = SubBlockPlacement::empty(h);

    out.place(0, 0, corners.upper_left)?;
    out.place(last, 0, corners.upper_right)?;
    out.place(0, last, corners.lower_left)?;
    out.place(last, last, corners.lower_right)?;

    // Left column top-to-bottom; right partners inherit the row.
    let lefts: Vec<usize> = pairs.horizontal.iter().map(|p| p.left).collect();
    let order = chain(corners.upper_left, &lefts, |a, b| tables.vertical(a, b), &mut diag.chain_ties);
    let mut inherited_right = Vec::with_capacity(edge);
    for (row, &left) in order.iter().enumerate() {
        let partner = pairs.horizontal.iter().find(|p| p.left == left).expect("chained from pairs");
        out.place(0, row + 1, left)?;
        out.place(last, row + 1, partner.right)?;
        inherited_right.push(partner.right);
    }

    // Top row left-to-right; bottom partners inherit the column.
    let tops: Vec<usize> = pairs.vertical.iter().map(|p| p.top).collect();
    let order = chain(corners.upper_left, &tops, |a, b| tables.horizontal(a, b), &mut diag.chain_ties);
    let mut inherited_bottom = Vec::with_capacity(edge);
    for (col, &top) in order.iter().enumerate() {
        let partner = pairs.vertical.iter().find(|p| p.top == top).expect("chained from pairs");
        out.place(col + 1, 0, top)?;
        out.place(col + 1, last, partner.bottom)?;
        inherited_bottom.push(partner.bottom);
    }

    let mut scratch = 0;
    let rights: Vec<usize> = pairs.horizontal.iter().map(|p| p.right).collect();
    let independent = chain(corners.upper_right, &rights, |a, b| tables.vertical(a, b), &mut scratch);
    diag.right_chain_disagreements = independent.iter().zip(&inherited_right).filter(|(a, b)| a != b).count();
    let bottoms: Vec<usize> = pairs.vertical.iter().map(|p| p.bottom).collect();
    let independent = chain(corners.lower_left, &bottoms, |a, b| tables.horizontal(a, b), &mut scratch);
    diag.bottom_chain_disagreements = independent.iter().zip(&inherited_bottom).filter(|(a, b)| a != b).count();

    let k = h * h;
    for y in 1..last {
        for x in 1..last {
            let left = out.get(x - 1, y).expect("left neighbour placed");
            let up = out.get(x, y - 1).expect("upper neighbour placed");
            let mut best: Option<(u64, usize)> = None;
            let mut tied = false;
            for p in (0..k).filter(|&p| !out.is_taken(p)) {
                let cost = tables.horizontal(left, p) + tables.vertical(up, p);
                match best {
                    Some((b, _)) if cost > b => {}
                    Some((b, _)) if cost == b => tied = true,
                    _ => {
                        best = Some((cost, p));
                        tied = false;
                    }
                }
            }
            let (_, p) = best.ok_or_else(|| Error::Incomplete("ran out of positions for interior".into()))?;
            diag.fill_ties += tied as usize;
            out.place(x, y, p)?;
        }
    }

    if !out.is_complete() {
        return Err(Error::Incomplete("placement left cells empty".into()));
    }
    Ok((out, diag))
}
