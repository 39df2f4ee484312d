//! Reproducible random-number streams.
//!
//! Each replicate gets its own ChaCha12 stream: the cipher key is expanded
//! from the master seed with SplitMix64 and the 64-bit ChaCha stream
//! counter is set to the replicate index. Results are therefore functions
//! of (master_seed, replicate_index) alone, independent of how replicates
//! are assigned to workers. Standard normal variates come from the
//! ziggurat implementation in `rand_distr::StandardNormal`.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// The stream for one replicate of a Monte Carlo run.
pub fn replicate_rng(master_seed: u64, replicate: u64) -> ChaCha12Rng {
    let mut state = master_seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha12Rng::from_seed(key);
    rng.set_stream(replicate);
    rng
}

/// Provenance tag carried by every sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SeedInfo {
    pub master_seed: u64,
    pub replicate: u64,
}
