//! Binary linear block codes: BCH construction and generic (G, H) plumbing.
//!
//! Vector/polynomial correspondence used throughout: position 0 of a length-n
//! vector holds the coefficient of `x^{n−1}` (leftmost = highest degree).
//! Generator and parity-check matrices are kept in systematic form
//! `G = [I_k | P]`, `H = [Pᵀ | I_{n−k}]`.

use crate::error::{Error, Result};
use crate::gf2::bits::{BitMatrix, BitVector};
use crate::gf2::field::Gf2mField;
use crate::gf2::poly::Gf2Poly;

/// Minimal polynomial over GF(2) of `α^exponent` in the given field: the
/// product of `(x + α^c)` over the cyclotomic coset of `exponent`.
pub fn minimal_polynomial(field: &Gf2mField, exponent: u64) -> Result<Gf2Poly> {
    let order = field.order();
    if exponent == 0 || exponent >= order {
        return Err(Error::Range(format!(
            "exponent {exponent} outside 1..={} for GF(2^{})",
            order - 1,
            field.m()
        )));
    }
    // Cyclotomic coset {e, 2e, 4e, ...} mod (2^m − 1).
    let mut coset = Vec::new();
    let mut c = exponent;
    loop {
        coset.push(c);
        c = (c * 2) % order;
        if c == exponent {
            break;
        }
    }
    // Expand ∏(x + α^c) with coefficients in GF(2^m).
    let mut coeffs: Vec<u64> = vec![1];
    for &c in &coset {
        let root = field.alpha_pow(c);
        let mut next = vec![0u64; coeffs.len() + 1];
        for (i, &a) in coeffs.iter().enumerate() {
            next[i + 1] ^= a; // x · a x^i
            next[i] ^= field.mul(root, a); // α^c · a x^i
        }
        coeffs = next;
    }
    // Conjugate roots come in full cosets, so the product collapses to GF(2).
    let mut poly = Gf2Poly::zero();
    for (i, &a) in coeffs.iter().enumerate() {
        debug_assert!(a <= 1, "minimal polynomial coefficient left the base field");
        poly.set_coeff(i, a == 1);
    }
    Ok(poly)
}

/// A binary linear block code with systematic generator and parity-check
/// matrices. Immutable after construction; all invariants are checked once.
#[derive(Debug, Clone)]
pub struct LinearCode {
    n: usize,
    k: usize,
    g: BitMatrix,
    h: BitMatrix,
    d_min: u32,
    t: u32,
    /// Generator polynomial for cyclic constructions, if applicable.
    generator_poly: Option<Gf2Poly>,
}

impl LinearCode {
    /// Validate and assemble a code from its matrices and known minimum
    /// distance. Checks `G·Hᵀ = 0`, `rank(G) = k`, and `rank(H) = n − k`.
    pub fn new(g: BitMatrix, h: BitMatrix, d_min: u32) -> Result<Self> {
        let k = g.rows();
        let n = g.cols();
        if k >= n {
            return Err(Error::Construction(format!(
                "generator is {k}×{n}; need k < n"
            )));
        }
        if h.rows() != n - k || h.cols() != n {
            return Err(Error::Dimension {
                what: "parity-check matrix",
                expected: (n - k) * n,
                got: h.rows() * h.cols(),
            });
        }
        for i in 0..k {
            if !h.mul_transpose(&g.row(i)).is_zero() {
                return Err(Error::Construction(format!(
                    "G·Hᵀ ≠ 0: generator row {i} has nonzero syndrome"
                )));
            }
        }
        if g.rank() != k {
            return Err(Error::Construction("generator matrix is rank-deficient".into()));
        }
        if h.rank() != n - k {
            return Err(Error::Construction(
                "parity-check matrix is rank-deficient".into(),
            ));
        }
        if d_min == 0 {
            return Err(Error::Construction("minimum distance must be positive".into()));
        }
        Ok(Self {
            n,
            k,
            g,
            h,
            d_min,
            t: (d_min - 1) / 2,
            generator_poly: None,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    /// Code rate `k / n`.
    #[inline]
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    #[inline]
    pub fn d_min(&self) -> u32 {
        self.d_min
    }

    /// Guaranteed correction radius `⌊(d_min − 1) / 2⌋`.
    #[inline]
    pub fn t(&self) -> u32 {
        self.t
    }

    #[inline]
    pub fn generator(&self) -> &BitMatrix {
        &self.g
    }

    #[inline]
    pub fn parity_check(&self) -> &BitMatrix {
        &self.h
    }

    pub fn generator_poly(&self) -> Option<&Gf2Poly> {
        self.generator_poly.as_ref()
    }

    /// Encode a k-bit message as `u·G`.
    pub fn encode(&self, u: &BitVector) -> Result<BitVector> {
        if u.len() != self.k {
            return Err(Error::Dimension {
                what: "message length",
                expected: self.k,
                got: u.len(),
            });
        }
        let mut c = BitVector::zeros(self.n);
        for i in 0..self.k {
            if u.get(i) {
                c.xor_assign(&self.g.row(i));
            }
        }
        Ok(c)
    }

    /// Syndrome `v·Hᵀ` of an n-bit word.
    pub fn syndrome(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.n {
            return Err(Error::Dimension {
                what: "word length",
                expected: self.n,
                got: v.len(),
            });
        }
        Ok(self.h.mul_transpose(v))
    }

    /// Human-readable descriptor: parameters, generator polynomial (highest
    /// degree first) when the code is cyclic, and the parity-check rows.
    pub fn describe(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        writeln!(
            out,
            "(n={}, k={}) linear code, d_min={}, t={}",
            self.n, self.k, self.d_min, self.t
        )
        .unwrap();
        if let Some(g) = &self.generator_poly {
            let deg = g.degree().unwrap_or(0);
            let coeffs: String = (0..=deg)
                .rev()
                .map(|i| if g.coeff(i) { '1' } else { '0' })
                .collect();
            writeln!(out, "g(x) = {g}").unwrap();
            writeln!(out, "g coefficients (highest degree first): {coeffs}").unwrap();
        }
        writeln!(out, "H ({}×{}):", self.h.rows(), self.h.cols()).unwrap();
        for r in 0..self.h.rows() {
            writeln!(out, "{}", self.h.row(r)).unwrap();
        }
        out
    }
}

/// Map a polynomial to an n-position vector under the convention
/// position 0 ↔ coefficient of `x^{n−1}`.
pub fn poly_to_vec(p: &Gf2Poly, n: usize) -> BitVector {
    debug_assert!(p.degree().is_none_or(|d| d < n));
    let mut v = BitVector::zeros(n);
    for i in 0..n {
        if p.coeff(n - 1 - i) {
            v.set(i, true);
        }
    }
    v
}

/// Inverse of [`poly_to_vec`].
pub fn vec_to_poly(v: &BitVector) -> Gf2Poly {
    let n = v.len();
    let mut p = Gf2Poly::zero();
    for i in 0..n {
        if v.get(i) {
            p.set_coeff(n - 1 - i, true);
        }
    }
    p
}

/// Construct the primitive narrow-sense BCH code of length `2^m − 1` with
/// design correction radius `t_design`.
///
/// The generator polynomial is the least common multiple of the minimal
/// polynomials of `α¹ … α^{2·t_design}` (a product of the distinct ones,
/// since minimal polynomials are irreducible). `G = [I_k | P]` is obtained
/// from polynomial remainders: row `i` is the codeword
/// `x^{n−1−i} + (x^{n−1−i} mod g)`.
pub fn bch_construct(m: u32, t_design: u32) -> Result<LinearCode> {
    if t_design == 0 {
        return Err(Error::Range("design correction radius must be at least 1".into()));
    }
    let field = Gf2mField::new(m)?;
    let n = field.order() as usize;
    let order = field.order();

    // Collect distinct minimal polynomials across the root span.
    let mut factors: Vec<Gf2Poly> = Vec::new();
    for e in 1..=(2 * t_design as u64) {
        let e_red = e % order;
        let mp = if e_red == 0 {
            // α^{2^m−1} = 1, whose minimal polynomial is x + 1.
            Gf2Poly::from_coeff_word(0b11)
        } else {
            minimal_polynomial(&field, e_red)?
        };
        if !factors.contains(&mp) {
            factors.push(mp);
        }
    }
    let mut g = Gf2Poly::one();
    for f in &factors {
        g = g.mul(f);
    }
    let deg_g = g.degree().expect("generator polynomial is nonzero");
    if deg_g >= n {
        return Err(Error::Construction(format!(
            "degenerate code: deg g = {deg_g} leaves no message bits for n = {n}"
        )));
    }
    let k = n - deg_g;

    // Systematic generator rows from remainders modulo g.
    let mut g_mat = BitMatrix::zeros(k, n);
    for i in 0..k {
        let row_poly = Gf2Poly::monomial(n - 1 - i);
        let row = row_poly.add(&row_poly.rem(&g));
        let v = poly_to_vec(&row, n);
        debug_assert!(v.get(i));
        for c in 0..n {
            if v.get(c) {
                g_mat.set(i, c, true);
            }
        }
    }
    // H = [Pᵀ | I_{n−k}] where P is the right k×(n−k) block of G.
    let r = n - k;
    let mut h_mat = BitMatrix::zeros(r, n);
    for row in 0..r {
        for col in 0..k {
            if g_mat.get(col, k + row) {
                h_mat.set(row, col, true);
            }
        }
        h_mat.set(row, k + row, true);
    }

    // Minimum distance: exact for small codes, BCH design distance otherwise
    // (they coincide for the parameter sets this crate targets).
    let design_d = 2 * t_design + 1;
    let mut code = LinearCode::new(g_mat, h_mat, design_d)?;
    code.generator_poly = Some(g);
    if k <= 20 {
        let exact = min_distance_bruteforce(&code)?;
        code.d_min = exact;
        code.t = (exact - 1) / 2;
    }
    Ok(code)
}

/// Exact minimum distance by enumerating all `2^k − 1` nonzero codewords in
/// Gray-code order (one generator-row XOR per step).
pub fn min_distance_bruteforce(code: &LinearCode) -> Result<u32> {
    if code.k > 20 {
        return Err(Error::Capacity(format!(
            "minimum-distance enumeration needs 2^k steps; k = {} exceeds the bound of 20",
            code.k
        )));
    }
    let mut current = BitVector::zeros(code.n);
    let mut best = u32::MAX;
    for msg in 1u64..(1u64 << code.k) {
        let flip = msg.trailing_zeros() as usize;
        current.xor_assign(&code.g.row(flip));
        best = best.min(current.weight());
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf16() -> Gf2mField {
        Gf2mField::new(4).unwrap()
    }

    #[test]
    fn minimal_polynomial_of_primitive_element() {
        // The minimal polynomial of α itself is the defining polynomial.
        let mp = minimal_polynomial(&gf16(), 1).unwrap();
        assert_eq!(mp.to_coeff_word(), Some(0b10011)); // x^4 + x + 1
    }

    #[test]
    fn minimal_polynomial_alpha_cubed() {
        // Coset {3, 6, 12, 9}: (x+α³)(x+α⁶)(x+α¹²)(x+α⁹) = x^4+x^3+x^2+x+1.
        let mp = minimal_polynomial(&gf16(), 3).unwrap();
        assert_eq!(mp.to_coeff_word(), Some(0b11111));
    }

    #[test]
    fn minimal_polynomial_alpha_fifth() {
        // Coset {5, 10}: quadratic x^2 + x + 1.
        let mp = minimal_polynomial(&gf16(), 5).unwrap();
        assert_eq!(mp.to_coeff_word(), Some(0b111));
    }

    #[test]
    fn minimal_polynomials_divide_field_polynomial() {
        let f = Gf2mField::new(6).unwrap();
        let xn1 = Gf2Poly::monomial(63).add(&Gf2Poly::one());
        for e in 1..63 {
            let mp = minimal_polynomial(&f, e).unwrap();
            assert!(mp.divides(&xn1), "minimal polynomial of α^{e}");
        }
    }

    #[test]
    fn minimal_polynomial_rejects_bad_exponent() {
        assert!(minimal_polynomial(&gf16(), 0).is_err());
        assert!(minimal_polynomial(&gf16(), 15).is_err());
    }

    #[test]
    fn bch_15_5_parameters() {
        let code = bch_construct(4, 3).unwrap();
        assert_eq!(code.n(), 15);
        assert_eq!(code.k(), 5);
        assert_eq!(code.d_min(), 7);
        assert_eq!(code.t(), 3);
        // g(x) = x^10 + x^8 + x^5 + x^4 + x^2 + x + 1
        assert_eq!(
            code.generator_poly().unwrap().to_coeff_word(),
            Some(0b101_0011_0111)
        );
    }

    #[test]
    fn bch_63_45_and_63_36_parameters() {
        let a = bch_construct(6, 3).unwrap();
        assert_eq!((a.n(), a.k()), (63, 45));
        assert_eq!(a.d_min(), 7);
        let b = bch_construct(6, 5).unwrap();
        assert_eq!((b.n(), b.k()), (63, 36));
        assert_eq!(b.d_min(), 11);
    }

    #[test]
    fn bch_15_7_parameters() {
        let code = bch_construct(4, 2).unwrap();
        assert_eq!((code.n(), code.k()), (15, 7));
        assert_eq!(code.d_min(), 5);
        assert_eq!(code.t(), 2);
    }

    #[test]
    fn generator_poly_divides_xn_plus_one() {
        for (m, t) in [(4, 2), (4, 3), (6, 3), (6, 5)] {
            let code = bch_construct(m, t).unwrap();
            let n = code.n();
            let xn1 = Gf2Poly::monomial(n).add(&Gf2Poly::one());
            assert!(code.generator_poly().unwrap().divides(&xn1), "m={m} t={t}");
        }
    }

    #[test]
    fn degenerate_construction_rejected() {
        // 2t = 4 roots in GF(4) exhaust every factor of x^3 + 1, leaving k = 0.
        assert!(bch_construct(2, 2).is_err());
        assert!(bch_construct(4, 0).is_err());
    }

    #[test]
    fn encode_zero_and_unit_messages() {
        let code = bch_construct(4, 3).unwrap();
        let zero = code.encode(&BitVector::zeros(5)).unwrap();
        assert!(zero.is_zero());
        for i in 0..5 {
            let mut u = BitVector::zeros(5);
            u.set(i, true);
            assert_eq!(code.encode(&u).unwrap(), code.generator().row(i));
        }
    }

    #[test]
    fn encode_rejects_wrong_length() {
        let code = bch_construct(4, 3).unwrap();
        assert!(code.encode(&BitVector::zeros(6)).is_err());
        assert!(code.syndrome(&BitVector::zeros(14)).is_err());
    }

    #[test]
    fn codewords_have_zero_syndrome() {
        let code = bch_construct(6, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let mut u = BitVector::zeros(45);
            for i in 0..45 {
                u.set(i, rng.gen());
            }
            let c = code.encode(&u).unwrap();
            assert!(code.syndrome(&c).unwrap().is_zero());
        }
    }

    #[test]
    fn syndrome_ignores_codeword_component() {
        // syndrome(encode(u) ⊕ e) = syndrome(e) over many random draws
        let code = bch_construct(4, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10_000 {
            let mut u = BitVector::zeros(5);
            for i in 0..5 {
                u.set(i, rng.gen());
            }
            let mut e = BitVector::zeros(15);
            for i in 0..15 {
                e.set(i, rng.gen());
            }
            let v = code.encode(&u).unwrap().xor(&e);
            assert_eq!(code.syndrome(&v).unwrap(), code.syndrome(&e).unwrap());
        }
    }

    #[test]
    fn distinct_weight_1_to_3_patterns_have_distinct_syndromes() {
        // Correction radius 3 for the (15,5) code means the syndrome map is
        // injective on patterns of weight up to 3.
        let code = bch_construct(4, 3).unwrap();
        let mut seen = std::collections::HashMap::new();
        for bits in 0u64..(1 << 15) {
            if bits.count_ones() > 3 {
                continue;
            }
            let v = BitVector::from_u64(bits, 15);
            let s = code.syndrome(&v).unwrap().as_u64();
            if let Some(prev) = seen.insert(s, bits) {
                panic!("patterns {prev:#b} and {bits:#b} share a syndrome");
            }
        }
        assert_eq!(seen.len(), 576); // sum of C(15, w) for w = 0..3
    }

    #[test]
    fn same_syndrome_error_pair() {
        // Two weight-limited patterns whose difference is a codeword are
        // indistinguishable from the syndrome alone.
        let code = bch_construct(4, 3).unwrap();
        let e1 = BitVector::from_bits(&[1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        let e2 = BitVector::from_bits(&[0, 0, 0, 0, 0, 1, 0, 1, 1, 0, 0, 1, 0, 0, 0]);
        let s1 = code.syndrome(&e1).unwrap();
        let s2 = code.syndrome(&e2).unwrap();
        assert!(!s1.is_zero());
        assert_eq!(s1, s2);
        // Equivalent statement: e1 ⊕ e2 maps to a multiple of g(x).
        let diff = vec_to_poly(&e1.xor(&e2));
        assert!(code.generator_poly().unwrap().divides(&diff));
    }

    #[test]
    fn weight_distribution_15_5() {
        let code = bch_construct(4, 3).unwrap();
        let mut hist = [0usize; 16];
        for msg in 0u64..32 {
            let mut u = BitVector::zeros(5);
            for i in 0..5 {
                u.set(i, (msg >> i) & 1 == 1);
            }
            hist[code.encode(&u).unwrap().weight() as usize] += 1;
        }
        assert_eq!(hist[0], 1);
        assert_eq!(hist[7], 15);
        assert_eq!(hist[8], 15);
        assert_eq!(hist[15], 1);
        assert_eq!(hist[1..7].iter().sum::<usize>(), 0);
    }

    #[test]
    fn min_distance_bruteforce_examples() {
        assert_eq!(min_distance_bruteforce(&bch_construct(4, 3).unwrap()).unwrap(), 7);
        assert_eq!(min_distance_bruteforce(&bch_construct(4, 2).unwrap()).unwrap(), 5);

        // n=3 repetition code assembled by hand
        let g = BitMatrix::from_dense(1, 3, &[1, 1, 1]);
        let h = BitMatrix::from_dense(2, 3, &[1, 1, 0, 0, 1, 1]);
        let rep = LinearCode::new(g, h, 3).unwrap();
        assert_eq!(min_distance_bruteforce(&rep).unwrap(), 3);
    }

    #[test]
    fn min_distance_refuses_large_k() {
        let code = bch_construct(6, 3).unwrap(); // k = 45
        assert!(min_distance_bruteforce(&code).is_err());
    }

    #[test]
    fn linear_code_new_rejects_inconsistent_pair() {
        let g = BitMatrix::from_dense(1, 3, &[1, 1, 1]);
        // second row not orthogonal to G
        let h = BitMatrix::from_dense(2, 3, &[1, 1, 0, 0, 0, 1]);
        assert!(LinearCode::new(g, h, 3).is_err());
    }

    #[test]
    fn describe_contains_parameters() {
        let code = bch_construct(4, 3).unwrap();
        let text = code.describe();
        assert!(text.contains("n=15"));
        assert!(text.contains("d_min=7"));
        assert!(text.contains("10100110111")); // g coefficients, highest first
        assert!(text.contains("H (10×15):"));
    }

    #[test]
    fn poly_vector_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let mut v = BitVector::zeros(63);
            for i in 0..63 {
                v.set(i, rng.gen());
            }
            assert_eq!(poly_to_vec(&vec_to_poly(&v), 63), v);
        }
    }
}
