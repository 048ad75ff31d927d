//! Seed derivation.
//!
//! Every random draw in the crate comes from a [`SimRng`] built from a
//! 64-bit seed. Per-trial seeds are derived from one master seed by folding a
//! list of integer tags (stream name, dimension, shots, state index, trial
//! index, ...) through the SplitMix64 finalizer:
//!
//! ```text
//! h = master
//! for t in tags: h = mix(h ^ mix(t + 0x9E3779B97F4A7C15))
//! ```
//!
//! so any single trial of a sweep can be replayed in isolation.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type SimRng = ChaCha20Rng;

/// Stream tags used by the crate when deriving seeds.
pub mod stream {
    pub const STATE: u64 = 1;
    pub const TRIAL: u64 = 2;
    pub const BASIS: u64 = 3;
    pub const RETRY: u64 = 4;
    pub const MEASURE: u64 = 5;
    pub const ORACLE: u64 = 6;
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    tags.iter()
        .fold(master, |h, &t| mix(h ^ mix(t.wrapping_add(GOLDEN))))
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}
