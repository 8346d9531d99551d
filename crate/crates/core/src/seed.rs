//! Deterministic seeding.
//!
//! Experiments shard work across items (graphs, trials, runs); each item
//! draws from its own substream derived from the base seed and the item
//! index, so parallel and sequential execution agree bitwise.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic RNG for a given seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derive an independent substream seed from `(base, index)`.
///
/// splitmix64 finalizer; distinct `(base, index)` pairs map to
/// well-separated states even for adjacent indices.
pub fn substream(base: u64, index: u64) -> u64 {
    let mut z = base
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(index)
        .wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substreams_are_distinct() {
        let mut seen = std::collections::HashSet::new();
        for base in 0..8u64 {
            for idx in 0..256u64 {
                assert!(seen.insert(substream(base, idx)));
            }
        }
    }

    #[test]
    fn rng_is_reproducible() {
        use rand::Rng;
        let a: Vec<u32> = (0..4).map(|_| 0).collect();
        let _ = a;
        let mut r1 = rng(42);
        let mut r2 = rng(42);
        let x1: Vec<u64> = (0..8).map(|_| r1.gen()).collect();
        let x2: Vec<u64> = (0..8).map(|_| r2.gen()).collect();
        assert_eq!(x1, x2);
    }
}
