//! Deterministic random substreams.
//!
//! Every random decision in the crate draws from a stream derived by hashing
//! a root seed together with a component tag and replicate indices. Adding
//! replicates or components never perturbs the draws of existing ones, and
//! the hash is stable across platforms and releases.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use sha2::{Digest, Sha256};

fn digest(seed: u64, tags: &[&str], indices: &[u64]) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    for tag in tags {
        hasher.update([0xff]);
        hasher.update(tag.as_bytes());
    }
    for index in indices {
        hasher.update([0xfe]);
        hasher.update(index.to_le_bytes());
    }
    hasher.finalize().into()
}

/// A generator for the substream identified by `(seed, tags, indices)`.
pub fn substream(seed: u64, tags: &[&str], indices: &[u64]) -> ChaCha12Rng {
    ChaCha12Rng::from_seed(digest(seed, tags, indices))
}

/// A 64-bit seed for the substream, for handing to APIs that take raw seeds.
pub fn substream_seed(seed: u64, tags: &[&str], indices: &[u64]) -> u64 {
    let bytes = digest(seed, tags, indices);
    u64::from_le_bytes(bytes[..8].try_into().expect("digest is 32 bytes"))
}
