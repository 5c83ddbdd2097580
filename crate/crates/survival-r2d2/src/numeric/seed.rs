//! Deterministic RNG stream derivation.
//!
//! Every random quantity in the crate flows from a single master seed.
//! Substreams are derived by folding a label path through SplitMix64 and
//! expanding the result into a ChaCha12 key, so replicate r of design d
//! always sees the same stream no matter how work is scheduled.

use rand_chacha::ChaCha12Rng;
use rand_chacha::rand_core::SeedableRng;

/// One SplitMix64 step.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child RNG from `master` and a label path.
pub fn derive_rng(master: u64, path: &[u64]) -> ChaCha12Rng {
    let mut state = master;
    let _ = splitmix64(&mut state);
    for &label in path {
        state ^= label.wrapping_mul(0xD6E8_FEB8_6659_FD93);
        let _ = splitmix64(&mut state);
    }
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha12Rng::from_seed(key)
}
