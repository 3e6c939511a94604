//! Labelled, seeded random streams.
//!
//! A stream is ChaCha20 keyed by SHA-256 of a domain tag, the little-endian
//! seed and the label. Both primitives are fixed, so a `(seed, label)` pair
//! yields the same draws on every platform and distinct labels yield
//! independent streams.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

pub type Stream = ChaCha20Rng;

const DOMAIN: &[u8] = b"mistrust/rng-stream/v1\0";

pub fn rng_stream(seed: u64, label: &str) -> Stream {
    let mut hasher = Sha256::new();
    hasher.update(DOMAIN);
    hasher.update(seed.to_le_bytes());
    hasher.update(label.as_bytes());
    let key: [u8; 32] = hasher.finalize().into();
    ChaCha20Rng::from_seed(key)
}

/// A 64-bit seed derived from `(seed, label)`, used to fan a base seed out
/// into per-trial session seeds.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    rng_stream(seed, label).next_u64()
}
