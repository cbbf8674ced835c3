//! Stand-in for the classical signature on the measurement table.
//!
//! This is a keyed SHA-256 tag, `H(k ‖ H(k ‖ msg))`. The verification key is
//! the same secret as the signing key, so anyone able to verify could also
//! sign. It exists to exercise the protocol flow (tamper detection, reject
//! without measuring) and offers no public-key security.

use rand::RngCore;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::mathcore::Rng;

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BankKeys {
    secret: [u8; 32],
}

/// Verifier handle distributed with the money.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationKey {
    secret: [u8; 32],
}

fn tag(key: &[u8; 32], msg: &[u8]) -> Vec<u8> {
    let inner = Sha256::new().chain_update(key).chain_update(msg).finalize();
    Sha256::new().chain_update(key).chain_update(inner).finalize().to_vec()
}

impl BankKeys {
    pub fn generate(rng: &mut Rng) -> Self {
        let mut secret = [0u8; 32];
        rng.fill_bytes(&mut secret);
        Self { secret }
    }

    pub fn from_secret(secret: [u8; 32]) -> Self {
        Self { secret }
    }

    pub fn verification_key(&self) -> VerificationKey {
        VerificationKey { secret: self.secret }
    }

    pub fn sign(&self, msg: &[u8]) -> Vec<u8> {
        tag(&self.secret, msg)
    }
}

impl VerificationKey {
    pub fn verify(&self, msg: &[u8], sig: &[u8]) -> bool {
        tag(&self.secret, msg) == sig
    }
}

impl std::fmt::Debug for BankKeys {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("BankKeys(..)")
    }
}

impl std::fmt::Debug for VerificationKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("VerificationKey(..)")
    }
}
