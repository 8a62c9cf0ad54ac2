//! Deterministic seed derivation.
//!
//! Every random stream in a run is a ChaCha8 generator seeded with
//! `mix(parent, a, b)`, where `mix` chains SplitMix64 finalizers:
//!
//! ```text
//! mix(m, a, b) = sm(sm(sm(m) ^ a) ^ b)
//! sm(z) = let z = z + 0x9E3779B97F4A7C15;
//!         z = (z ^ z>>30) * 0xBF58476D1CE4E5B9;
//!         z = (z ^ z>>27) * 0x94D049BB133111EB;
//!         z ^ z>>31                              (wrapping arithmetic)
//! ```
//!
//! The run driver uses `mix(master_seed, point_index, repetition_index)`;
//! the simulators derive their per-experiment streams from that the same way.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[inline]
pub fn splitmix64(z: u64) -> u64 {
    let z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    let z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
pub fn mix(parent: u64, a: u64, b: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(parent) ^ a) ^ b)
}

pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
