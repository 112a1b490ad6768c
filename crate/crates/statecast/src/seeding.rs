//! Deterministic sub-seed derivation.
//!
//! Every randomized procedure draws from a ChaCha stream addressed by
//! (master seed, stream index). Trials therefore produce identical results
//! no matter how many workers execute them or in what order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// RNG for one independent unit of work (a trial, a tree, a fold).
pub fn stream_rng(master_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}
