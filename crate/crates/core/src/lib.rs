//! Block-wise perceptual image encryption (block scrambling plus a shared
//! sub-block pixel shuffle) and a ciphertext-only attack on it: statistical
//! sub-block restoration followed by a genetic-algorithm jigsaw solver.

pub mod bench;
pub mod cipher;
pub mod error;
pub mod image;
pub mod jigsaw;
pub mod metrics;
pub mod permutation;
pub mod unshuffle;

pub use error::{Error, Result};
pub use image::{BlockGeometry, Image, Quadrant, SubBlockIndex};
pub use permutation::Permutation;
