//! GF(2^m) arithmetic via log/antilog tables.
//!
//! Elements are bit-packed polynomials in α of degree below `m`; α is a root
//! of the chosen primitive polynomial, so `antilog[i] = α^i` and the tables
//! turn multiplication into exponent addition modulo `2^m − 1`.

use crate::error::{Error, Result};
use crate::gf2::poly::Gf2Poly;

/// Default primitive polynomial per extension degree, packed with bit `i` as
/// the coefficient of `x^i` (e.g. `0b10011` is `x^4 + x + 1`). Lowest-weight
/// entries from the standard tables; primitivity is re-verified at
/// construction.
const DEFAULT_PRIMITIVE_POLY: [(u32, u64); 9] = [
    (2, 0b111),
    (3, 0b1011),
    (4, 0b10011),
    (5, 0b100101),
    (6, 0b1000011),
    (7, 0b1000_1001),
    (8, 0b1_0001_1101),
    (9, 0b10_0001_0001),
    (10, 0b100_0000_1001),
];

/// The finite field GF(2^m) with a fixed primitive element α.
#[derive(Debug, Clone)]
pub struct Gf2mField {
    m: u32,
    primitive_poly: u64,
    /// `log[x - 1] = i` such that `α^i = x`, for nonzero `x`.
    log: Vec<u32>,
    /// `antilog[i] = α^i` for `0 ≤ i < 2^m − 1`.
    antilog: Vec<u64>,
}

impl Gf2mField {
    /// Construct GF(2^m) with the standard primitive polynomial for `m`.
    pub fn new(m: u32) -> Result<Self> {
        let &(_, poly) = DEFAULT_PRIMITIVE_POLY
            .iter()
            .find(|&&(deg, _)| deg == m)
            .ok_or_else(|| {
                Error::Range(format!("extension degree m={m} outside supported range 2..=10"))
            })?;
        Self::with_primitive_poly(m, poly)
    }

    /// Construct GF(2^m) from an explicit degree-`m` polynomial, verifying
    /// that `x` is a primitive element (which also implies irreducibility).
    pub fn with_primitive_poly(m: u32, primitive_poly: u64) -> Result<Self> {
        if !(2..=10).contains(&m) {
            return Err(Error::Range(format!(
                "extension degree m={m} outside supported range 2..=10"
            )));
        }
        let expected_deg = Some(m as usize);
        if Gf2Poly::from_coeff_word(primitive_poly).degree() != expected_deg {
            return Err(Error::Construction(format!(
                "primitive polynomial {primitive_poly:#b} does not have degree {m}"
            )));
        }
        let order = (1u64 << m) - 1;
        let mut antilog = vec![0u64; order as usize];
        let mut log = vec![u32::MAX; order as usize];
        // Walk powers of α: multiply by x, reduce by the defining polynomial.
        let mut elem = 1u64;
        for (i, slot) in antilog.iter_mut().enumerate() {
            if log[(elem - 1) as usize] != u32::MAX {
                // revisited an element early: x has order < 2^m − 1
                return Err(Error::Construction(format!(
                    "polynomial {primitive_poly:#b} is not primitive: α repeats at exponent {i}"
                )));
            }
            *slot = elem;
            log[(elem - 1) as usize] = i as u32;
            elem <<= 1;
            if elem >> m != 0 {
                elem ^= primitive_poly;
            }
        }
        if elem != 1 {
            return Err(Error::Construction(format!(
                "polynomial {primitive_poly:#b} does not define a field: α^{order} ≠ 1"
            )));
        }
        Ok(Self {
            m,
            primitive_poly,
            log,
            antilog,
        })
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of nonzero elements, `2^m − 1`.
    #[inline]
    pub fn order(&self) -> u64 {
        (1u64 << self.m) - 1
    }

    #[inline]
    pub fn primitive_poly(&self) -> u64 {
        self.primitive_poly
    }

    /// `α^e` (exponent reduced modulo `2^m − 1`).
    #[inline]
    pub fn alpha_pow(&self, e: u64) -> u64 {
        self.antilog[(e % self.order()) as usize]
    }

    /// Discrete log of a nonzero element.
    #[inline]
    pub fn log(&self, x: u64) -> u32 {
        assert!(x != 0 && x <= self.order(), "log of invalid element {x}");
        self.log[(x - 1) as usize]
    }

    /// Field product.
    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.alpha_pow(self.log(a) as u64 + self.log(b) as u64)
    }

    /// Field sum (bitwise XOR in characteristic 2).
    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }
}
