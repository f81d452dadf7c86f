//! Deterministic RNG streams.
//!
//! All randomness in the pipeline flows through ChaCha12 streams keyed by a
//! single user seed, so identical seed + identical inputs reproduce every
//! mask bit-exactly, regardless of the parallelism level. Each patch gets
//! its own stream keyed by its block index; the random-baseline sampler and
//! the measurement-noise generator use reserved stream ids.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Seed for one reproducible run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RngSeed(pub u64);

impl From<u64> for RngSeed {
    fn from(seed: u64) -> Self {
        RngSeed(seed)
    }
}

const BASELINE_STREAM: u64 = 1 << 63;
const NOISE_STREAM: u64 = (1 << 63) + 1;

/// Stream for the patch at the given row-major block index.
pub fn patch_stream(seed: RngSeed, block_index: u64) -> ChaCha12Rng {
    debug_assert!(block_index < BASELINE_STREAM);
    let mut rng = ChaCha12Rng::seed_from_u64(seed.0);
    rng.set_stream(block_index);
    rng
}

/// Stream for the pure-random baseline sampler.
pub fn baseline_stream(seed: RngSeed) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed.0);
    rng.set_stream(BASELINE_STREAM);
    rng
}

/// Stream for additive measurement noise.
pub fn noise_stream(seed: RngSeed) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed.0);
    rng.set_stream(NOISE_STREAM);
    rng
}
