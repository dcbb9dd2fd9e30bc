//! Seed derivation for reproducible parallel runs.
//!
//! Work item `i` of a run seeded with `seed` always draws from
//! `derived_rng(seed, i)`, independent of scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream `index` of the generator keyed by `seed`.
pub fn derived_rng(seed: u64, index: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A fresh 64-bit seed for work item `index`, for APIs that take a plain seed.
pub fn derived_seed(seed: u64, index: u64) -> u64 {
    use rand::RngCore;
    derived_rng(seed, index).next_u64()
}
