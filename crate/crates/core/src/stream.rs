//! Deterministic random streams keyed by integer coordinates.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function: a bijective 64-bit avalanche mix.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A pseudo-random stream owned by one consumer.
///
/// Streams are derived from a master seed and a tuple of coordinates, so
/// any replication can be regenerated without replaying the others.
#[derive(Clone, Debug)]
pub struct RngStream(Xoshiro256PlusPlus);

impl RngStream {
    pub fn from_seed_u64(seed: u64) -> Self {
        Self(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    /// Hashes `(master_seed, coords...)` into the initial state.
    pub fn derive(master_seed: u64, coords: &[u64]) -> Self {
        let mut h = mix64(master_seed ^ GOLDEN);
        for (i, &c) in coords.iter().enumerate() {
            let salt = GOLDEN.wrapping_mul(i as u64 + 2);
            h = mix64(h ^ mix64(c.wrapping_add(salt)));
        }
        Self::from_seed_u64(h)
    }
}

impl RngCore for RngStream {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.0.fill_bytes(dst)
    }
}
