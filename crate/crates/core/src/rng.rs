//! Seed derivation and per-substream generators.
//!
//! Every random draw in the crate comes from a ChaCha8 stream keyed by a
//! 64-bit seed mixed with a short list of counters (step, candidate, ...).
//! A draw therefore depends only on its coordinates, never on how many other
//! draws happened before it, so serial and parallel evaluation agree.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a base seed with an ordered list of words.
///
/// `hash64(s, [a, b]) = f(f(f(s) ^ a) ^ b)` with `f` the SplitMix64 finalizer.
pub fn hash64(seed: u64, words: &[u64]) -> u64 {
    words
        .iter()
        .fold(splitmix64(seed), |acc, &w| splitmix64(acc ^ w))
}

/// Stable 64-bit id of a short label (FNV-1a).
pub fn label_id(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Independent generator for the substream addressed by `words`.
pub fn substream(seed: u64, words: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(hash64(seed, words))
}
