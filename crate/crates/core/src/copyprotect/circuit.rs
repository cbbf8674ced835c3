use super::CopyError;
use crate::mathcore::BitString;
use crate::money_conjugate::Prf;
use crate::quantumsim::Gate;

const CODE_BITS: usize = 2;

fn address_bits(m: usize) -> usize {
    (usize::BITS - (m - 1).leading_zeros()) as usize
}

/// Bits consumed per gate: a 2-bit gate code and two qubit addresses.
pub fn gate_bit_cost(m: usize) -> usize {
    CODE_BITS + 2 * address_bits(m)
}

fn read(bits: &BitString, at: usize, len: usize) -> usize {
    (0..len).fold(0, |acc, k| acc | (bits.get(at + k) as usize) << k)
}

/// Decodes `l` gates over `{H, T, CNOT}` on `m ≥ 2` qubits.
///
/// Each gate reads `[code | a | b]` little-endian. Codes 0 and 3 mean `H`,
/// 1 means `T`, 2 means `CNOT`. Addresses are reduced mod `m`; single-qubit
/// gates act on `a` and ignore `b`; a CNOT with `a = b` targets `a + 1 mod m`.
pub fn decode_circuit(bits: &BitString, m: usize, l: usize) -> Result<Vec<Gate>, CopyError> {
    if m < 2 {
        return Err(CopyError::Config(format!("circuits need at least 2 qubits, got {m}")));
    }
    let w = gate_bit_cost(m);
    let ab = address_bits(m);
    if bits.len() < w * l {
        return Err(CopyError::InsufficientBits { needed: w * l, available: bits.len() });
    }
    Ok((0..l)
        .map(|g| {
            let at = g * w;
            let a = read(bits, at + CODE_BITS, ab) % m;
            let b = read(bits, at + CODE_BITS + ab, ab) % m;
            match read(bits, at, CODE_BITS) {
                1 => Gate::T(a),
                2 => Gate::Cnot { control: a, target: if a == b { (a + 1) % m } else { b } },
                _ => Gate::H(a),
            }
        })
        .collect())
}

/// Canonical bit string decoding back to `gates` (which must use only
/// `H`, `T` and `CNOT`).
pub fn encode_circuit(gates: &[Gate], m: usize) -> Result<BitString, CopyError> {
    let w = gate_bit_cost(m);
    let ab = address_bits(m);
    let mut bits = BitString::zeros(w * gates.len());
    let mut write = |at: usize, len: usize, v: usize| {
        for k in 0..len {
            bits.set(at + k, v >> k & 1 == 1);
        }
    };
    for (g, gate) in gates.iter().enumerate() {
        let at = g * w;
        let (code, a, b) = match gate {
            Gate::H(q) => (0, *q, 0),
            Gate::T(q) => (1, *q, 0),
            Gate::Cnot { control, target } => (2, *control, *target),
            other => return Err(CopyError::Config(format!("gate {other:?} is outside {{H, T, CNOT}}"))),
        };
        write(at, CODE_BITS, code);
        write(at + CODE_BITS, ab, a);
        write(at + CODE_BITS + ab, ab, b);
    }
    Ok(bits)
}

/// Public pseudorandom expansion of `x` to `len` bits (fixed-key PRF in
/// counter mode).
pub fn prg_expand(x: &BitString, len: usize) -> BitString {
    Prf::new(b"point-function circuit generator".to_vec(), len).eval(x)
}
