use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use sha2::{Digest, Sha256};

/// Seeded, splittable random source.
///
/// Each stream is a ChaCha keystream whose key is derived from the root seed
/// and the sequence of split labels. A child depends only on its parent's key
/// and label, never on how much of the parent stream was consumed, so
/// parallel trials get the same randomness regardless of scheduling.
#[derive(Clone, Debug)]
pub struct Rng {
    seed: u64,
    key: [u8; 32],
    inner: ChaCha12Rng,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        let mut h = Sha256::new();
        h.update(b"unclonable/rng/root");
        h.update(seed.to_le_bytes());
        Self::from_key(seed, h.finalize().into())
    }

    fn from_key(seed: u64, key: [u8; 32]) -> Self {
        Self { seed, key, inner: ChaCha12Rng::from_seed(key) }
    }

    /// The root seed this stream descends from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent child stream identified by `label`.
    pub fn split(&self, label: &str) -> Rng {
        let mut h = Sha256::new();
        h.update(self.key);
        h.update((label.len() as u64).to_le_bytes());
        h.update(label.as_bytes());
        Self::from_key(self.seed, h.finalize().into())
    }

    /// Child stream keyed by fresh output of this stream; unlike `split`,
    /// successive forks differ.
    pub fn fork(&mut self) -> Rng {
        let mut key = [0u8; 32];
        self.inner.fill_bytes(&mut key);
        let mut h = Sha256::new();
        h.update(b"fork");
        h.update(key);
        Self::from_key(self.seed, h.finalize().into())
    }

    /// Child stream `index` within the family `label` (e.g. one per trial).
    pub fn split_index(&self, label: &str, index: u64) -> Rng {
        let mut h = Sha256::new();
        h.update(self.key);
        h.update((label.len() as u64).to_le_bytes());
        h.update(label.as_bytes());
        h.update(index.to_le_bytes());
        Self::from_key(self.seed, h.finalize().into())
    }
}

impl RngCore for Rng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
