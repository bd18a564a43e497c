//! Bijections on `0..len`, and the keyed shuffle that produces them.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};

/// A bijection on `0..len`. `mapping[i]` is the destination of source index `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    /// Validates that `mapping` is a bijection.
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; mapping.len()];
        for &d in &mapping {
            if d >= mapping.len() || std::mem::replace(&mut seen[d], true) {
                return Err(Error::InvalidArgument(format!(
                    "not a permutation of 0..{}: bad or repeated index {d}",
                    mapping.len()
                )));
            }
        }
        Ok(Permutation { mapping })
    }

    pub fn identity(len: usize) -> Self {
        Permutation {
            mapping: (0..len).collect(),
        }
    }

    /// Deterministic keyed permutation: Fisher-Yates driven by ChaCha20
    /// seeded from `seed`.
    pub fn from_seed(seed: u64, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidArgument("permutation length must be >= 1".into()));
        }
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut mapping: Vec<usize> = (0..len).collect();
        fisher_yates(&mut mapping, &mut rng);
        Ok(Permutation { mapping })
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.mapping
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.mapping
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(i, &d)| i == d)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.mapping.len()];
        for (src, &dst) in self.mapping.iter().enumerate() {
            inv[dst] = src;
        }
        Permutation { mapping: inv }
    }

    /// `self` followed by `next`: index `i` goes to `next[self[i]]`.
    pub fn then(&self, next: &Permutation) -> Result<Self> {
        if self.len() != next.len() {
            return Err(Error::InvalidArgument(format!(
                "cannot compose permutations of length {} and {}",
                self.len(),
                next.len()
            )));
        }
        Ok(Permutation {
            mapping: self.mapping.iter().map(|&d| next.mapping[d]).collect(),
        })
    }

    /// Moves `src[i]` to position `self[i]`.
    pub fn apply<T: Copy>(&self, src: &[T]) -> Vec<T> {
        assert_eq!(src.len(), self.len(), "permutation/slice length mismatch");
        let mut out = src.to_vec();
        for (i, &d) in self.mapping.iter().enumerate() {
            out[d] = src[i];
        }
        out
    }
}

impl std::ops::Index<usize> for Permutation {
    type Output = usize;

    fn index(&self, i: usize) -> &usize {
        &self.mapping[i]
    }
}

/// `make_permutation(seed, length)`.
pub fn make_permutation(seed: u64, len: usize) -> Result<Permutation> {
    Permutation::from_seed(seed, len)
}

pub fn invert_permutation(p: &Permutation) -> Permutation {
    p.inverse()
}

/// In-place unbiased Fisher-Yates shuffle. Index draws use 64-bit rejection
/// sampling so the output depends only on the generator's `u64` stream.
pub fn fisher_yates<T>(items: &mut [T], rng: &mut impl RngCore) {
    for i in (1..items.len()).rev() {
        let j = uniform_below(rng, i as u64 + 1) as usize;
        items.swap(i, j);
    }
}

/// Uniform draw from `0..bound` (`bound > 0`).
pub fn uniform_below(rng: &mut impl RngCore, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    let threshold = bound.wrapping_neg() % bound;
    loop {
        let x = rng.next_u64();
        if x >= threshold {
            return x % bound;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn length_one_is_trivial() {
        for seed in [0, 1, u64::MAX] {
            assert_eq!(make_permutation(seed, 1).unwrap().as_slice(), &[0]);
        }
    }

    #[test]
    fn zero_length_is_rejected() {
        assert!(matches!(make_permutation(3, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn golden_vector_seed_42_len_8() {
        // Frozen output of the pinned ChaCha20 + Fisher-Yates shuffle.
        let p = make_permutation(42, 8).unwrap();
        assert_eq!(p.as_slice(), &GOLDEN_42_8);
    }

    const GOLDEN_42_8: [usize; 8] = [7, 3, 6, 4, 1, 5, 2, 0];

    #[test]
    fn invert_small_cases() {
        assert!(Permutation::identity(5).inverse().is_identity());
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(p.inverse().as_slice(), &[1, 2, 0]);
    }

    #[test]
    fn new_rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn apply_moves_to_destination() {
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(p.apply(&['a', 'b', 'c']), vec!['b', 'c', 'a']);
        assert_eq!(p.inverse().apply(&p.apply(&['a', 'b', 'c'])), vec!['a', 'b', 'c']);
    }

    #[test]
    fn uniform_below_covers_range() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let mut counts = [0usize; 5];
        for _ in 0..5000 {
            counts[uniform_below(&mut rng, 5) as usize] += 1;
        }
        assert!(counts.iter().all(|&c| c > 850 && c < 1150), "{counts:?}");
    }

    proptest! {
        #[test]
        fn seeded_permutations_are_bijections(seed: u64, len in 1usize..300) {
            let p = make_permutation(seed, len).unwrap();
            let mut sorted = p.as_slice().to_vec();
            sorted.sort_unstable();
            prop_assert_eq!(sorted, (0..len).collect::<Vec<_>>());
            prop_assert_eq!(&make_permutation(seed, len).unwrap(), &p);
        }

        #[test]
        fn composing_with_inverse_is_identity(seed: u64, len in 1usize..128) {
            let p = make_permutation(seed, len).unwrap();
            prop_assert!(p.then(&p.inverse()).unwrap().is_identity());
            prop_assert!(p.inverse().then(&p).unwrap().is_identity());
        }
    }
}
