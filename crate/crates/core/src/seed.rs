//! Deterministic seed derivation.
//!
//! Every random stream in the crate is a [`ChaCha8Rng`] seeded from a 64-bit
//! value derived by [`derive_seed`], so results depend only on the master
//! seed and the logical coordinates of a stream (grid point, block index),
//! never on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random generator used throughout the crate.
pub type SimRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hash of `(master, point, index)`: splitmix64 applied in a chain.
pub fn derive_seed(master: u64, point: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ point) ^ index)
}

pub fn stream(master: u64, point: u64, index: u64) -> SimRng {
    SimRng::seed_from_u64(derive_seed(master, point, index))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = stream(7, 1, 2).gen();
        let b: u64 = stream(7, 1, 2).gen();
        let c: u64 = stream(7, 2, 1).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(derive_seed(0, 0, 1), derive_seed(0, 1, 0));
    }
}
