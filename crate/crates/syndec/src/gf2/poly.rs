//! Polynomials over GF(2), packed with coefficient of `x^i` at bit `i`.

use std::fmt;

/// A binary polynomial. The zero polynomial has an empty coefficient set and
/// degree `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Poly {
    /// Bit `i` of word `i / 64` is the coefficient of `x^i`.
    words: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Self { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self { words: vec![1] }
    }

    /// The monomial `x^e`.
    pub fn monomial(e: usize) -> Self {
        let mut words = vec![0u64; e / 64 + 1];
        words[e / 64] = 1u64 << (e % 64);
        Self { words }
    }

    /// Build from a packed word: bit `i` is the coefficient of `x^i`.
    /// `0b10011` is `x^4 + x + 1`.
    pub fn from_coeff_word(word: u64) -> Self {
        let mut p = Self { words: vec![word] };
        p.trim();
        p
    }

    /// Packed coefficients, if the degree is below 64.
    pub fn to_coeff_word(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + (63 - last.leading_zeros() as usize))
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn set_coeff(&mut self, i: usize, value: bool) {
        if i / 64 >= self.words.len() {
            if !value {
                return;
            }
            self.words.resize(i / 64 + 1, 0);
        }
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
            self.trim();
        }
    }

    /// Polynomial addition (characteristic 2: same as subtraction).
    pub fn add(&self, other: &Gf2Poly) -> Gf2Poly {
        let n = self.words.len().max(other.words.len());
        let mut words = vec![0u64; n];
        for (i, w) in words.iter_mut().enumerate() {
            *w = self.words.get(i).copied().unwrap_or(0) ^ other.words.get(i).copied().unwrap_or(0);
        }
        let mut p = Gf2Poly { words };
        p.trim();
        p
    }

    /// Carry-less polynomial product.
    pub fn mul(&self, other: &Gf2Poly) -> Gf2Poly {
        if self.is_zero() || other.is_zero() {
            return Gf2Poly::zero();
        }
        let deg = self.degree().unwrap() + other.degree().unwrap();
        let mut out = Gf2Poly {
            words: vec![0u64; deg / 64 + 1],
        };
        for i in 0..=self.degree().unwrap() {
            if !self.coeff(i) {
                continue;
            }
            for (j, &w) in other.words.iter().enumerate() {
                // shift `other` left by i and xor in, word by word
                let base = i / 64 + j;
                let sh = i % 64;
                out.words[base] ^= w << sh;
                if sh != 0 && base + 1 < out.words.len() {
                    out.words[base + 1] ^= w >> (64 - sh);
                }
            }
        }
        out.trim();
        out
    }

    /// Remainder of `self` divided by `divisor` (long division).
    pub fn rem(&self, divisor: &Gf2Poly) -> Gf2Poly {
        let d = divisor.degree().expect("division by zero polynomial");
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < d {
                break;
            }
            let shift = rd - d;
            // r -= divisor * x^shift
            for i in 0..=d {
                if divisor.coeff(i) {
                    let pos = i + shift;
                    r.words[pos / 64] ^= 1u64 << (pos % 64);
                }
            }
            r.trim();
        }
        r
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, divisor: &Gf2Poly) -> (Gf2Poly, Gf2Poly) {
        let d = divisor.degree().expect("division by zero polynomial");
        let mut q = Gf2Poly::zero();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < d {
                break;
            }
            let shift = rd - d;
            q.set_coeff(shift, true);
            for i in 0..=d {
                if divisor.coeff(i) {
                    let pos = i + shift;
                    r.words[pos / 64] ^= 1u64 << (pos % 64);
                }
            }
            r.trim();
        }
        (q, r)
    }

    /// Whether `self` divides `other` exactly.
    pub fn divides(&self, other: &Gf2Poly) -> bool {
        other.rem(self).is_zero()
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(deg) = self.degree() else {
            return write!(f, "0");
        };
        let mut first = true;
        for i in (0..=deg).rev() {
            if !self.coeff(i) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "1")?,
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_and_zero() {
        assert_eq!(Gf2Poly::zero().degree(), None);
        assert_eq!(Gf2Poly::one().degree(), Some(0));
        assert_eq!(Gf2Poly::monomial(70).degree(), Some(70));
        assert_eq!(Gf2Poly::from_coeff_word(0b10011).degree(), Some(4));
    }

    #[test]
    fn mul_known_product() {
        // (x + 1)(x + 1) = x^2 + 1 over GF(2)
        let a = Gf2Poly::from_coeff_word(0b11);
        assert_eq!(a.mul(&a), Gf2Poly::from_coeff_word(0b101));
        // (x^2 + x + 1)(x + 1) = x^3 + 1
        let b = Gf2Poly::from_coeff_word(0b111);
        let c = Gf2Poly::from_coeff_word(0b11);
        assert_eq!(b.mul(&c), Gf2Poly::from_coeff_word(0b1001));
    }

    #[test]
    fn mul_across_word_boundary() {
        // x^40 * x^40 = x^80 needs a second word
        let a = Gf2Poly::monomial(40);
        assert_eq!(a.mul(&a), Gf2Poly::monomial(80));
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = Gf2Poly::from_coeff_word(0b1_1010_1101);
        let d = Gf2Poly::from_coeff_word(0b1011);
        let (q, r) = a.div_rem(&d);
        assert_eq!(q.mul(&d).add(&r), a);
        assert!(r.degree().is_none_or(|rd| rd < 3));
    }

    #[test]
    fn rem_examples() {
        // x^4 + x + 1 divides x^15 + 1 (it is primitive of degree 4)
        let g = Gf2Poly::from_coeff_word(0b10011);
        let xn1 = Gf2Poly::monomial(15).add(&Gf2Poly::one());
        assert!(g.divides(&xn1));
        assert!(!g.divides(&Gf2Poly::monomial(14).add(&Gf2Poly::one())));
    }

    #[test]
    fn display_formatting() {
        assert_eq!(Gf2Poly::from_coeff_word(0b10011).to_string(), "x^4 + x + 1");
        assert_eq!(Gf2Poly::zero().to_string(), "0");
    }
}
