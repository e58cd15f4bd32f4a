//! Counter-based stream seeding for reproducible Monte Carlo runs.
//!
//! Each trial gets its own ChaCha stream derived from the master seed and the
//! trial coordinates, so results are independent of execution order and of
//! how trials are distributed over worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer; full-avalanche mixing of one 64-bit word.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child seed from a master seed and a stream counter.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    splitmix64(splitmix64(master) ^ splitmix64(stream.wrapping_mul(0xA24B_AED4_963E_E407)))
}

/// RNG for one Monte Carlo trial, identified by (scenario, trial) counters.
pub fn trial_rng(master: u64, scenario: u64, trial: u64) -> ChaCha8Rng {
    let s = derive_seed(derive_seed(master, scenario), trial);
    ChaCha8Rng::seed_from_u64(s)
}
