//! Arithmetic in GF(2^m) for small `m`, enough to build Reed-Solomon codes
//! whose codeword sets can be enumerated.

use crate::error::{Error, Result};

/// Irreducible (primitive) polynomials, bit `i` = coefficient of `x^i`.
const MODULI: [u32; 17] = [
    0, 0b11, 0b111, 0b1011, 0b1_0011, 0b10_0101, 0b100_0011, 0b1000_1001, 0x11D, 0x211, 0x409,
    0x805, 0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
];

pub const MAX_DEGREE: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gf2m {
    degree: u32,
    modulus: u32,
}

impl Gf2m {
    pub fn new(degree: u32) -> Result<Self> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::param(format!(
                "GF(2^m) supported for 1 <= m <= {MAX_DEGREE}, got m = {degree}"
            )));
        }
        Ok(Gf2m {
            degree,
            modulus: MODULI[degree as usize],
        })
    }

    pub fn order(&self) -> u64 {
        1 << self.degree
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }

    /// Carry-less multiplication reduced by the field modulus.
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let (mut a, mut b) = (a, b);
        let mut acc = 0u64;
        let top = 1u64 << self.degree;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.modulus as u64;
            }
        }
        acc
    }

    /// Horner evaluation of `coeffs[0] + coeffs[1] x + ...`.
    pub fn eval(&self, coeffs: &[u64], x: u64) -> u64 {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }
}
