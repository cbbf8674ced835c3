use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::mathcore::{BitString, Rng};
use rand::RngCore;

/// Keyed pseudorandom function `{0,1}* → {0,1}^output_len`: SHA-256 over
/// `(key, input, block counter)` in counter mode.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prf {
    key: Vec<u8>,
    output_len: usize,
}

impl Prf {
    pub fn new(key: Vec<u8>, output_len: usize) -> Self {
        Self { key, output_len }
    }

    /// Fresh 256-bit key.
    pub fn random(output_len: usize, rng: &mut Rng) -> Self {
        let mut key = vec![0u8; 32];
        rng.fill_bytes(&mut key);
        Self { key, output_len }
    }

    pub fn output_len(&self) -> usize {
        self.output_len
    }

    pub fn eval(&self, input: &BitString) -> BitString {
        let nbytes = self.output_len.div_ceil(8);
        let mut out = Vec::with_capacity(nbytes + 32);
        let mut counter = 0u64;
        while out.len() < nbytes {
            let mut h = Sha256::new();
            h.update((self.key.len() as u64).to_le_bytes());
            h.update(&self.key);
            h.update((input.len() as u64).to_le_bytes());
            h.update(input.to_bytes());
            h.update(counter.to_le_bytes());
            out.extend_from_slice(&h.finalize());
            counter += 1;
        }
        BitString::from_bytes(&out, self.output_len)
    }
}

impl std::fmt::Debug for Prf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Prf").field("output_len", &self.output_len).finish_non_exhaustive()
    }
}
