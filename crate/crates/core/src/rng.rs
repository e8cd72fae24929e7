//! Seeded random streams.
//!
//! Every stochastic routine takes a caller-owned [`ChainRng`]. Work split
//! across documents or chains derives one independent stream per unit from
//! a base seed, so sequential and parallel execution consume identical
//! random numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type ChainRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> ChainRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream `index` of the family rooted at `seed`.
pub fn stream(seed: u64, index: u64) -> ChainRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
