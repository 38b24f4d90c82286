//! Reproducible random streams.
//!
//! Every stream is a ChaCha8 generator keyed by SHA-256 of
//! `(master seed, phase label, indices)`. ChaCha is itself counter based, so a
//! stream's output depends only on its key and never on how many other
//! streams were drawn before it or on which thread draws it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type StreamRng = ChaCha8Rng;

/// Master seed from which all per-replication, per-phase streams are split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Streams {
    master: u64,
}

impl Streams {
    pub fn new(master: u64) -> Self {
        Self { master }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    fn key(&self, phase: &str, indices: &[u64]) -> [u8; 32] {
        let mut hasher = Sha256::new();
        hasher.update(self.master.to_le_bytes());
        hasher.update((phase.len() as u64).to_le_bytes());
        hasher.update(phase.as_bytes());
        for idx in indices {
            hasher.update(idx.to_le_bytes());
        }
        hasher.finalize().into()
    }

    /// Generator for `(phase, indices)`.
    pub fn stream(&self, phase: &str, indices: &[u64]) -> StreamRng {
        ChaCha8Rng::from_seed(self.key(phase, indices))
    }

    /// A derived 64-bit seed, for handing to APIs that take a plain seed.
    pub fn derive_seed(&self, phase: &str, indices: &[u64]) -> u64 {
        let key = self.key(phase, indices);
        u64::from_le_bytes(key[..8].try_into().expect("8 bytes"))
    }
}
