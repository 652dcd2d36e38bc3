//! Deterministic seed derivation.
//!
//! Every Monte-Carlo routine takes a master seed and derives one independent
//! stream per trial with [`derive`]. The rule is a fixed SplitMix64 mix of
//! `(master, index)`, so results do not depend on scheduling or on how trials
//! are partitioned across workers.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One SplitMix64 output step.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Derives the sub-seed for trial `index` under `master`.
pub fn derive(master: u64, index: u64) -> u64 {
    let mut state = master;
    let a = splitmix64(&mut state);
    let mut state = a ^ index;
    splitmix64(&mut state)
}

/// Builds the RNG for trial `index` under `master`.
pub fn rng_for(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(master, index))
}

/// Builds the RNG directly from a seed (trial index 0).
pub fn rng(seed: u64) -> ChaCha8Rng {
    rng_for(seed, 0)
}
