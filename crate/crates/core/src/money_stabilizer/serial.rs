//! Binary and JSON encodings of a note.
//!
//! Binary layout (integers little-endian):
//!
//! ```text
//! "STABNOTE" | version u8 | n u32 | l u32 | m u32 | eps f64
//! sig_len u32 | sig
//! table_len u64 | table, exactly ⌈(2n+1)ℓm / 8⌉ bytes
//! "SIMSTATE" | states_len u64 | ℓ·n generators, (2n+1) bits each, packed
//! ```
//!
//! The final section exists only because the registers are simulated.

use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine;
use serde::{Deserialize, Serialize};

use super::params::SchemeParams;
use super::scheme::StabBanknote;
use super::table::MeasurementTable;
use super::StabMoneyError;
use crate::mathcore::BitString;
use crate::stabilizer::{SignedPauli, StabilizerTableau};

pub const MAGIC: &[u8; 8] = b"STABNOTE";
pub const STATE_MARKER: &[u8; 8] = b"SIMSTATE";
const VERSION: u8 = 1;

fn states_to_bytes(states: &[StabilizerTableau], n: usize) -> Vec<u8> {
    let w = 2 * n + 1;
    let mut bits = BitString::zeros(w * n * states.len());
    let mut pos = 0;
    for g in states.iter().flat_map(|s| s.generators()) {
        for (k, b) in g.to_bits().iter().enumerate() {
            if b {
                bits.set(pos + k, true);
            }
        }
        pos += w;
    }
    bits.to_bytes()
}

fn states_from_bytes(
    bytes: &[u8],
    n: usize,
    l: usize,
    offset: usize,
) -> Result<Vec<StabilizerTableau>, StabMoneyError> {
    let w = 2 * n + 1;
    let len = w * n * l;
    if bytes.len() != len.div_ceil(8) {
        return Err(StabMoneyError::Parse {
            offset,
            reason: format!("state section must be {} bytes", len.div_ceil(8)),
        });
    }
    let bits = BitString::from_bytes(bytes, len);
    (0..l)
        .map(|i| {
            let gens = (0..n)
                .map(|g| SignedPauli::from_bits(&bits.slice((i * n + g) * w, w), n).expect("width checked"))
                .collect();
            StabilizerTableau::from_generators(n, gens).map_err(|e| StabMoneyError::Parse {
                offset: offset + i * n * w / 8,
                reason: format!("state {i}: {e}"),
            })
        })
        .collect()
}

pub fn serialize(note: &StabBanknote) -> Vec<u8> {
    let p = &note.params;
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    for v in [p.n, p.l, p.m] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    out.extend_from_slice(&p.eps.to_le_bytes());
    out.extend_from_slice(&(note.sig.len() as u32).to_le_bytes());
    out.extend_from_slice(&note.sig);
    let table = note.table.to_bytes();
    out.extend_from_slice(&(table.len() as u64).to_le_bytes());
    out.extend_from_slice(&table);
    out.extend_from_slice(STATE_MARKER);
    let states = states_to_bytes(&note.states, p.n);
    out.extend_from_slice(&(states.len() as u64).to_le_bytes());
    out.extend_from_slice(&states);
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize, what: &str) -> Result<&'a [u8], StabMoneyError> {
        if self.buf.len() - self.pos < len {
            return Err(StabMoneyError::Parse {
                offset: self.buf.len(),
                reason: format!("truncated while reading {what} ({len} bytes at {})", self.pos),
            });
        }
        let s = &self.buf[self.pos..self.pos + len];
        self.pos += len;
        Ok(s)
    }

    fn u32(&mut self, what: &str) -> Result<u32, StabMoneyError> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self, what: &str) -> Result<u64, StabMoneyError> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().expect("8 bytes")))
    }

    fn err(&self, at: usize, reason: impl Into<String>) -> StabMoneyError {
        StabMoneyError::Parse { offset: at, reason: reason.into() }
    }
}

pub fn deserialize(bytes: &[u8]) -> Result<StabBanknote, StabMoneyError> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(8, "magic")? != MAGIC {
        return Err(r.err(0, "bad magic"));
    }
    let version = r.take(1, "version")?[0];
    if version != VERSION {
        return Err(r.err(8, format!("unsupported version {version}")));
    }
    let at = r.pos;
    let n = r.u32("n")? as usize;
    let l = r.u32("l")? as usize;
    let m = r.u32("m")? as usize;
    let eps = f64::from_le_bytes(r.take(8, "eps")?.try_into().expect("8 bytes"));
    let params = SchemeParams::new(n, l, m, eps).map_err(|e| r.err(at, e.to_string()))?;
    let sig_len = r.u32("signature length")? as usize;
    let sig = r.take(sig_len, "signature")?.to_vec();
    let at = r.pos;
    let table_len = r.u64("table length")? as usize;
    let want = params.table_bits().div_ceil(8);
    if table_len != want {
        return Err(r.err(at, format!("table length {table_len}, expected {want}")));
    }
    let table = MeasurementTable::from_bytes(r.take(table_len, "table")?, n, l, m)?;
    let at = r.pos;
    if r.take(8, "state marker")? != STATE_MARKER {
        return Err(r.err(at, "missing state marker"));
    }
    let states_len = r.u64("state section length")? as usize;
    let at = r.pos;
    let states = states_from_bytes(r.take(states_len, "states")?, n, l, at)?;
    if r.pos != bytes.len() {
        return Err(r.err(r.pos, "trailing bytes"));
    }
    Ok(StabBanknote { params, states, table, sig })
}

/// JSON banknote file: header fields, base64 table, and the simulated
/// registers under their own key.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoteFile {
    pub n: usize,
    pub l: usize,
    pub m: usize,
    pub eps: f64,
    /// Hex-encoded signature.
    pub sig: String,
    /// Base64 of the packed table.
    pub table: String,
    /// Base64 of the packed generator bits; simulation only.
    pub simulation_states: String,
}

impl NoteFile {
    pub fn from_note(note: &StabBanknote) -> Self {
        let p = &note.params;
        Self {
            n: p.n,
            l: p.l,
            m: p.m,
            eps: p.eps,
            sig: hex::encode(&note.sig),
            table: B64.encode(note.table.to_bytes()),
            simulation_states: B64.encode(states_to_bytes(&note.states, p.n)),
        }
    }

    pub fn to_note(&self) -> Result<StabBanknote, StabMoneyError> {
        let bad = |reason: String| StabMoneyError::Parse { offset: 0, reason };
        let params = SchemeParams::new(self.n, self.l, self.m, self.eps)?;
        let sig = hex::decode(&self.sig).map_err(|e| bad(format!("sig: {e}")))?;
        let table_bytes = B64.decode(&self.table).map_err(|e| bad(format!("table: {e}")))?;
        if table_bytes.len() != params.table_bits().div_ceil(8) {
            return Err(bad(format!("table has {} bytes", table_bytes.len())));
        }
        let table = MeasurementTable::from_bytes(&table_bytes, self.n, self.l, self.m)?;
        let state_bytes = B64.decode(&self.simulation_states).map_err(|e| bad(format!("states: {e}")))?;
        let states = states_from_bytes(&state_bytes, self.n, self.l, 0)?;
        Ok(StabBanknote { params, states, table, sig })
    }
}
