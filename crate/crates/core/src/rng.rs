//! Deterministic counter-based RNG derivation.
//!
//! All randomness flows from a single master seed; per-task generators are
//! keyed by (experiment label, task index) through independent ChaCha
//! streams, so parallel sampling is reproducible and order-independent.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for one task: same seed, stream keyed by the task index.
pub fn task_rng(seed: u64, task_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(task_index);
    rng
}

/// Generator keyed additionally by a label (experiment or family name).
pub fn labeled_rng(seed: u64, label: &str, task_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(label));
    rng.set_stream(task_index);
    rng
}

/// FNV-1a hash of a label.
pub fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}
