//! Arithmetic in GF(2ⁿ) for 1 ≤ n ≤ 16.
//!
//! Elements are polynomials over GF(2) with the coefficient of `x^i` stored
//! in bit `i`. The same bits read as an unsigned integer give the element's
//! integer value, which is how field elements index basis states.

use serde::{Deserialize, Serialize};

use super::MathError;

pub const MAX_DEGREE: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Little-endian integer value (coefficient of `x^i` is bit `i`).
    pub fn to_int(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// GF(2ⁿ) with the numerically smallest irreducible modulus of degree n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Field2n {
    n: u32,
    /// Includes the leading `x^n` term.
    modulus: u32,
}

/// Carry-less product of two polynomials of degree < 32.
fn clmul(a: u32, b: u32) -> u64 {
    let (a, mut b) = (a as u64, b);
    let mut acc = 0u64;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

fn degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

/// Remainder of `a` modulo `m` in GF(2)[x].
fn poly_rem(mut a: u64, m: u64) -> u64 {
    let dm = degree(m);
    while a != 0 && degree(a) >= dm {
        a ^= m << (degree(a) - dm);
    }
    a
}

/// Trial division by every polynomial of degree 1..=deg/2.
pub fn is_irreducible(p: u32) -> bool {
    let d = degree(p as u64);
    if d < 1 {
        return false;
    }
    for q in 2u64..(1u64 << (d / 2 + 1)) {
        if poly_rem(p as u64, q) == 0 {
            return false;
        }
    }
    true
}

impl Field2n {
    /// Field of degree `n` using the lexicographically smallest irreducible
    /// polynomial (smallest as an integer with bit `n` set).
    pub fn new(n: u32) -> Result<Self, MathError> {
        if !(1..=MAX_DEGREE).contains(&n) {
            return Err(MathError::DegreeOutOfRange(n));
        }
        let modulus = ((1u32 << n)..(1u32 << (n + 1)))
            .find(|&p| is_irreducible(p))
            .expect("irreducible polynomials exist in every degree");
        Ok(Self { n, modulus })
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> u32 {
        1 << self.n
    }

    pub fn element(&self, value: u32) -> Result<FieldElement, MathError> {
        if value >= self.order() {
            return Err(MathError::ElementOutOfRange { value, n: self.n });
        }
        Ok(FieldElement(value))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order()).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ b.0)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(poly_rem(clmul(a.0, b.0), self.modulus as u64) as u32)
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let (mut base, mut acc) = (a, FieldElement::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via `a^(2ⁿ−2)`.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, MathError> {
        if a.is_zero() {
            return Err(MathError::DivisionByZero);
        }
        Ok(self.pow(a, (self.order() - 2) as u64))
    }

    /// Horner evaluation of `Σ coeffs[i]·x^i`.
    pub fn eval_poly(&self, coeffs: &[FieldElement], x: FieldElement) -> FieldElement {
        coeffs.iter().rev().fold(FieldElement::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mathcore::Rng;
    use rand::Rng as _;

    /// Irreducible iff no product of two lower-degree polynomials equals it.
    fn irreducible_by_products(p: u32) -> bool {
        let d = degree(p as u64);
        for a in 2u32..(1 << d) {
            for b in 2u32..(1 << d) {
                if clmul(a, b) == p as u64 {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn degree_one_uses_x() {
        let f = Field2n::new(1).unwrap();
        assert_eq!(f.modulus(), 0b10);
        assert_eq!(f.mul(FieldElement::ONE, FieldElement::ONE), FieldElement::ONE);
    }

    #[test]
    fn degree_two_uses_the_unique_irreducible() {
        let f = Field2n::new(2).unwrap();
        assert_eq!(f.modulus(), 0b111);
        let irreducibles: Vec<u32> = (4..8).filter(|&p| irreducible_by_products(p)).collect();
        assert_eq!(irreducibles, vec![0b111]);
    }

    #[test]
    fn moduli_are_smallest_irreducibles() {
        for n in 1..=8 {
            let f = Field2n::new(n).unwrap();
            assert!(irreducible_by_products(f.modulus()), "n={n}");
            for p in (1u32 << n)..f.modulus() {
                assert!(!irreducible_by_products(p), "n={n} p={p:b}");
            }
        }
        // GF(2^8): x^8+x^4+x^3+x+1 is the smallest, checked against all divisors of degree <= 4.
        assert_eq!(Field2n::new(8).unwrap().modulus(), 0x11b);
    }

    #[test]
    fn out_of_range_degrees_rejected() {
        assert!(matches!(Field2n::new(0), Err(MathError::DegreeOutOfRange(0))));
        assert!(matches!(Field2n::new(17), Err(MathError::DegreeOutOfRange(17))));
        assert!(Field2n::new(16).is_ok());
    }

    #[test]
    fn gf4_products() {
        let f = Field2n::new(2).unwrap();
        let x = FieldElement(0b10);
        assert_eq!(f.mul(x, x), FieldElement(0b11));
        assert_eq!(f.inv(x).unwrap(), FieldElement(0b11));
        assert_eq!(f.mul(x, FieldElement(0b11)), FieldElement::ONE);
    }

    #[test]
    fn inverses_match_exhaustive_search_gf16() {
        let f = Field2n::new(4).unwrap();
        for a in f.elements().skip(1) {
            let by_search = f.elements().find(|&b| f.mul(a, b) == FieldElement::ONE).unwrap();
            assert_eq!(f.inv(a).unwrap(), by_search);
            assert_eq!(f.mul(a, FieldElement::ONE), a);
        }
        assert_eq!(f.inv(FieldElement::ZERO), Err(MathError::DivisionByZero));
        assert_eq!(f.inv(FieldElement::ONE).unwrap(), FieldElement::ONE);
    }

    #[test]
    fn field_axioms_exhaustive_small_degrees() {
        for n in 1..=4 {
            let f = Field2n::new(n).unwrap();
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                for &b in &els {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
                if !a.is_zero() {
                    let inverses = els.iter().filter(|&&b| f.mul(a, b) == FieldElement::ONE).count();
                    assert_eq!(inverses, 1);
                }
            }
        }
    }

    #[test]
    fn poly_eval_matches_power_sums() {
        let f = Field2n::new(3).unwrap();
        let c = FieldElement(5);
        for x in f.elements() {
            assert_eq!(f.eval_poly(&[c], x), c);
            assert_eq!(f.eval_poly(&[FieldElement::ZERO, FieldElement::ONE], x), x);
        }
        let mut rng = Rng::new(3);
        for _ in 0..10 {
            let coeffs: Vec<_> = (0..4).map(|_| FieldElement(rng.random_range(0..8))).collect();
            for x in f.elements() {
                let naive = coeffs
                    .iter()
                    .enumerate()
                    .fold(FieldElement::ZERO, |acc, (i, &ci)| f.add(acc, f.mul(ci, f.pow(x, i as u64))));
                assert_eq!(f.eval_poly(&coeffs, x), naive);
            }
        }
    }
}
