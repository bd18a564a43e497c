//! Generational genetic algorithm for type-1 square-piece puzzles.
//!
//! Individuals are complete board assignments. Children are grown from a
//! single seed piece: every step extends the kernel at a free boundary slot,
//! preferring placements both parents agree on, then best-buddy links, then
//! the most compatible free piece. Growth never exceeds the board's
//! dimensions, so a finished kernel is exactly one board.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::permutation::fisher_yates;

use super::compat::{CompatibilityTable, Relation};
use super::pieces::{Assembly, PieceSet};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaParams {
    pub population: usize,
    pub generations: usize,
    pub elites: usize,
    pub mutation_rate: f64,
    pub seed: u64,
}

impl Default for GaParams {
    fn default() -> Self {
        GaParams {
            population: 1000,
            generations: 100,
            elites: 4,
            mutation_rate: 0.05,
            seed: 0,
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<()> {
        if self.elites < 1 || self.population < self.elites {
            return Err(Error::InvalidArgument(format!(
                "need population >= elites >= 1, got population {} elites {}",
                self.population, self.elites
            )));
        }
        if self.generations < 1 {
            return Err(Error::InvalidArgument("generations must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::InvalidArgument(format!(
                "mutation rate {} outside [0, 1]",
                self.mutation_rate
            )));
        }
        Ok(())
    }
}

/// Sum of dissimilarities over every horizontally and vertically adjacent
/// pair of cells.
pub fn fitness(assembly: &Assembly, table: &CompatibilityTable) -> f64 {
    fitness_of(assembly.cells(), assembly.cols(), assembly.rows(), table)
}

fn fitness_of(cells: &[usize], cols: usize, rows: usize, table: &CompatibilityTable) -> f64 {
    let mut total = 0.0;
    for r in 0..rows {
        for c in 0..cols {
            let a = cells[r * cols + c];
            if c + 1 < cols {
                total += table.get(a, cells[r * cols + c + 1], Relation::Right);
            }
            if r + 1 < rows {
                total += table.get(a, cells[(r + 1) * cols + c], Relation::Below);
            }
        }
    }
    total
}

#[derive(Clone, Debug)]
pub struct GaOutcome {
    pub assembly: Assembly,
    pub fitness: f64,
    /// Best fitness seen so far, after the initial population and after each
    /// generation.
    pub best_history: Vec<f64>,
}

struct Individual {
    cells: Vec<usize>,
    /// `position[piece]` = cell index.
    position: Vec<usize>,
    fitness: f64,
}

impl Individual {
    fn new(cells: Vec<usize>, cols: usize, rows: usize, table: &CompatibilityTable) -> Self {
        let mut position = vec![0; cells.len()];
        for (cell, &p) in cells.iter().enumerate() {
            position[p] = cell;
        }
        let fitness = fitness_of(&cells, cols, rows, table);
        Individual {
            cells,
            position,
            fitness,
        }
    }

    /// The piece at `rel` of `piece` in this individual, if on the board.
    #[inline]
    fn neighbour(&self, piece: usize, rel: Relation, cols: usize, rows: usize) -> Option<usize> {
        let cell = self.position[piece];
        let (c, r) = ((cell % cols) as isize, (cell / cols) as isize);
        let (dx, dy) = rel.offset();
        let (nc, nr) = (c + dx, r + dy);
        if nc < 0 || nr < 0 || nc >= cols as isize || nr >= rows as isize {
            return None;
        }
        Some(self.cells[nr as usize * cols + nc as usize])
    }
}

pub fn ga_solve(pieces: &PieceSet, table: &CompatibilityTable, params: &GaParams) -> Result<Assembly> {
    ga_solve_traced(pieces, table, params).map(|o| o.assembly)
}

/// Runs the GA and returns the best individual ever seen.
pub fn ga_solve_traced(pieces: &PieceSet, table: &CompatibilityTable, params: &GaParams) -> Result<GaOutcome> {
    params.validate()?;
    let (cols, rows) = (pieces.cols(), pieces.rows());
    let n = pieces.len();
    if table.len() != n {
        return Err(Error::InvalidArgument(format!(
            "compatibility table covers {} pieces, puzzle has {n}",
            table.len()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut population: Vec<Individual> = (0..params.population)
        .map(|_| {
            let mut cells: Vec<usize> = (0..n).collect();
            fisher_yates(&mut cells, &mut rng);
            Individual::new(cells, cols, rows, table)
        })
        .collect();

    let mut best = best_of(&population).clone_cells();
    let mut history = vec![best.1];
    let mut kernel = Kernel::new(table, cols, rows);

    for _ in 0..params.generations {
        // Stable sort keeps earlier-created individuals first on ties.
        population.sort_by(|a, b| a.fitness.total_cmp(&b.fitness));
        let weights: Vec<f64> = population.iter().map(|i| 1.0 / (i.fitness + 1.0)).collect();
        let wheel = Wheel::new(&weights);

        let mut next: Vec<Individual> = Vec::with_capacity(params.population);
        for elite in population.iter().take(params.elites) {
            next.push(Individual {
                cells: elite.cells.clone(),
                position: elite.position.clone(),
                fitness: elite.fitness,
            });
        }
        while next.len() < params.population {
            let a = &population[wheel.spin(&mut rng)];
            let b = &population[wheel.spin(&mut rng)];
            let cells = kernel.grow(a, b, params.mutation_rate, &mut rng);
            next.push(Individual::new(cells, cols, rows, table));
        }
        population = next;

        let gen_best = best_of(&population);
        if gen_best.fitness < best.1 {
            best = gen_best.clone_cells();
        }
        history.push(best.1);
    }

    Ok(GaOutcome {
        assembly: Assembly::new(cols, rows, best.0)?,
        fitness: best.1,
        best_history: history,
    })
}

fn best_of(pop: &[Individual]) -> &Individual {
    // First minimum wins ties.
    pop.iter()
        .reduce(|best, i| if i.fitness < best.fitness { i } else { best })
        .expect("population is non-empty")
}

impl Individual {
    fn clone_cells(&self) -> (Vec<usize>, f64) {
        (self.cells.clone(), self.fitness)
    }
}

/// Roulette-wheel selection over fixed weights.
struct Wheel {
    cumulative: Vec<f64>,
}

impl Wheel {
    fn new(weights: &[f64]) -> Self {
        let mut acc = 0.0;
        Wheel {
            cumulative: weights
                .iter()
                .map(|w| {
                    acc += w;
                    acc
                })
                .collect(),
        }
    }

    fn spin(&self, rng: &mut impl Rng) -> usize {
        let total = *self.cumulative.last().expect("non-empty wheel");
        let x = rng.gen::<f64>() * total;
        self.cumulative
            .partition_point(|&c| c <= x)
            .min(self.cumulative.len() - 1)
    }
}

const EMPTY: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
struct Candidate {
    cost: f64,
    seq: u32,
    slot: u32,
    piece: u32,
    anchor: u32,
    rel: u8,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // Reversed so `BinaryHeap` pops the cheapest, then the oldest.
    fn cmp(&self, other: &Self) -> Ordering {
        other.cost.total_cmp(&self.cost).then(other.seq.cmp(&self.seq))
    }
}

/// Reusable buffers for growing one child.
struct Kernel<'t> {
    table: &'t CompatibilityTable,
    cols: usize,
    rows: usize,
    grid_w: usize,
    grid: Vec<u32>,
    placed: Vec<bool>,
    free: Vec<u32>,
    free_index: Vec<u32>,
    cursor: Vec<u32>,
    bounds: (usize, usize, usize, usize),
    agreed: VecDeque<Candidate>,
    buddies: VecDeque<Candidate>,
    fits: BinaryHeap<Candidate>,
    seq: u32,
}

impl<'t> Kernel<'t> {
    fn new(table: &'t CompatibilityTable, cols: usize, rows: usize) -> Self {
        let n = table.len();
        let (grid_w, grid_h) = (2 * cols - 1, 2 * rows - 1);
        Kernel {
            table,
            cols,
            rows,
            grid_w,
            grid: vec![EMPTY; grid_w * grid_h],
            placed: vec![false; n],
            free: Vec::with_capacity(n),
            free_index: vec![0; n],
            cursor: vec![0; n * 4],
            bounds: (0, 0, 0, 0),
            agreed: VecDeque::new(),
            buddies: VecDeque::new(),
            fits: BinaryHeap::new(),
            seq: 0,
        }
    }

    fn reset(&mut self) {
        self.grid.fill(EMPTY);
        self.placed.fill(false);
        self.cursor.fill(0);
        self.free.clear();
        self.free.extend(0..self.table.len() as u32);
        for (i, f) in self.free_index.iter_mut().enumerate() {
            *f = i as u32;
        }
        self.agreed.clear();
        self.buddies.clear();
        self.fits.clear();
        self.seq = 0;
    }

    /// Whether `slot` is empty and placing there keeps the kernel within
    /// the board's dimensions.
    fn open(&self, slot: usize) -> bool {
        if self.grid[slot] != EMPTY {
            return false;
        }
        let (x, y) = (slot % self.grid_w, slot / self.grid_w);
        let (x0, x1, y0, y1) = self.bounds;
        x.max(x1) - x.min(x0) < self.cols && y.max(y1) - y.min(y0) < self.rows
    }

    fn neighbour_slot(&self, slot: usize, rel: Relation) -> Option<usize> {
        let (x, y) = ((slot % self.grid_w) as isize, (slot / self.grid_w) as isize);
        let (dx, dy) = rel.offset();
        let (nx, ny) = (x + dx, y + dy);
        let grid_h = self.grid.len() / self.grid_w;
        if nx < 0 || ny < 0 || nx as usize >= self.grid_w || ny as usize >= grid_h {
            return None;
        }
        Some(ny as usize * self.grid_w + nx as usize)
    }

    fn candidate(&mut self, slot: usize, piece: usize, anchor: usize, rel: Relation) -> Candidate {
        self.seq += 1;
        Candidate {
            cost: self.table.get(anchor, piece, rel),
            seq: self.seq,
            slot: slot as u32,
            piece: piece as u32,
            anchor: anchor as u32,
            rel: rel.index() as u8,
        }
    }

    /// Queues the most compatible free piece for `rel` of `anchor`.
    fn push_fit(&mut self, anchor: usize, rel: Relation, slot: usize) {
        let key = anchor * 4 + rel.index();
        let ranked = self.table.ranked(anchor, rel);
        let mut i = self.cursor[key] as usize;
        while i < ranked.len() && self.placed[ranked[i] as usize] {
            i += 1;
        }
        self.cursor[key] = i as u32;
        if i < ranked.len() {
            let c = self.candidate(slot, ranked[i] as usize, anchor, rel);
            self.fits.push(c);
        }
    }

    fn place(&mut self, piece: usize, slot: usize, parents: (&Individual, &Individual)) {
        self.grid[slot] = piece as u32;
        self.placed[piece] = true;
        let idx = self.free_index[piece] as usize;
        let last = *self.free.last().expect("piece was free");
        self.free.swap_remove(idx);
        if (last as usize) != piece {
            self.free_index[last as usize] = idx as u32;
        }

        let (x, y) = (slot % self.grid_w, slot / self.grid_w);
        let (x0, x1, y0, y1) = self.bounds;
        self.bounds = (x0.min(x), x1.max(x), y0.min(y), y1.max(y));

        for rel in Relation::ALL {
            let Some(next) = self.neighbour_slot(slot, rel) else { continue };
            if !self.open(next) {
                continue;
            }
            let (a, b) = parents;
            let na = a.neighbour(piece, rel, self.cols, self.rows);
            if let Some(q) = na.filter(|&q| !self.placed[q]) {
                if b.neighbour(piece, rel, self.cols, self.rows) == Some(q) {
                    let c = self.candidate(next, q, piece, rel);
                    self.agreed.push_back(c);
                }
            }
            if let Some(q) = self.table.best_buddy(piece, rel).filter(|&q| !self.placed[q]) {
                let c = self.candidate(next, q, piece, rel);
                self.buddies.push_back(c);
            }
            self.push_fit(piece, rel, next);
        }
    }

    fn pop_queued(&mut self, from_buddies: bool) -> Option<Candidate> {
        loop {
            let c = if from_buddies {
                self.buddies.pop_front()?
            } else {
                self.agreed.pop_front()?
            };
            if !self.placed[c.piece as usize] && self.open(c.slot as usize) {
                return Some(c);
            }
        }
    }

    fn pop_fit(&mut self) -> Option<Candidate> {
        while let Some(c) = self.fits.pop() {
            if !self.open(c.slot as usize) {
                continue;
            }
            if self.placed[c.piece as usize] {
                self.push_fit(c.anchor as usize, Relation::ALL[c.rel as usize], c.slot as usize);
                continue;
            }
            return Some(c);
        }
        None
    }

    /// Grows one child from two parents and returns its board cells.
    fn grow(&mut self, a: &Individual, b: &Individual, mutation_rate: f64, rng: &mut impl Rng) -> Vec<usize> {
        self.reset();
        let n = self.table.len();
        let centre = (self.rows - 1) * self.grid_w + (self.cols - 1);
        self.bounds = (self.cols - 1, self.cols - 1, self.rows - 1, self.rows - 1);
        let start = rng.gen_range(0..n);
        self.place(start, centre, (a, b));

        for _ in 1..n {
            let (piece, slot) = if let Some(c) = self.pop_queued(false) {
                (c.piece as usize, c.slot as usize)
            } else if let Some(c) = self.pop_queued(true) {
                (c.piece as usize, c.slot as usize)
            } else {
                let c = self.pop_fit().expect("a kernel smaller than the board always has an open slot");
                if mutation_rate > 0.0 && rng.gen::<f64>() < mutation_rate {
                    let r = rng.gen_range(0..self.free.len());
                    (self.free[r] as usize, c.slot as usize)
                } else {
                    (c.piece as usize, c.slot as usize)
                }
            };
            self.place(piece, slot, (a, b));
        }

        let (x0, _, y0, _) = self.bounds;
        let mut cells = vec![0; n];
        for (slot, &p) in self.grid.iter().enumerate() {
            if p != EMPTY {
                let (x, y) = (slot % self.grid_w - x0, slot / self.grid_w - y0);
                cells[y * self.cols + x] = p as usize;
            }
        }
        cells
    }
}
