//! Seeded random streams.
//!
//! Every sampling routine takes a base seed and a stream id so that work
//! split across threads (per source node, per grid cell, per repeat) draws
//! from independent, schedule-independent sequences.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Packs two indices into one stream id.
pub fn stream_id(major: u32, minor: u32) -> u64 {
    (u64::from(major) << 32) | u64::from(minor)
}
