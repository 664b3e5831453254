//! Seeded random streams.
//!
//! Every stochastic routine in the crate draws from ChaCha8 keyed by a `u64`
//! seed. Independent streams (bootstrap replicas, per-author analyses) share
//! the key and differ only in the ChaCha stream id, so a parallel run and a
//! sequential run see exactly the same numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Generator for stream `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derive a child seed, used when a whole sub-computation (for example a
/// bootstrap batch) needs its own seed rather than a single stream.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer over the pair
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
