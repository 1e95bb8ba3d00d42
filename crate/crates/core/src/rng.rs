//! Seeded, order-independent random streams.
//!
//! Every stream is a ChaCha8 keystream keyed by the user seed. The stream id
//! is a hash of an index tuple such as (Δ-index, repetition), and successive
//! draws within a stream walk its block counter, so draw `k` of a stream is
//! fixed by (seed, indices, k) no matter which thread consumes it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Environment variable consulted for a default seed.
pub const SEED_ENV: &str = "QPHASE_SEED";

pub const DEFAULT_SEED: u64 = 20240917;

pub fn stream(seed: u64, indices: &[u64]) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id(indices));
    rng
}

fn stream_id(indices: &[u64]) -> u64 {
    indices
        .iter()
        .fold(0x6a09_e667_f3bc_c908, |h, &i| splitmix64(h ^ splitmix64(i)))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
