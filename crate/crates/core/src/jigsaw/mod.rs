//! Square-piece jigsaw solving: piece cutting, pairwise compatibility and a
//! genetic solver.

pub mod compat;
pub mod ga;
pub mod pieces;

pub use compat::{build_compatibility, build_compatibility_with, rgb_to_lab, CompatibilityTable, Metric, Relation};
pub use ga::{fitness, ga_solve, ga_solve_traced, GaOutcome, GaParams};
pub use pieces::{assemble, cut_pieces, Assembly, PieceSet};
