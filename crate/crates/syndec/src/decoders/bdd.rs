//! Hard-decision bounded-distance decoding backed by a precomputed syndrome
//! table: every error pattern of weight ≤ t is enumerated once, keyed by its
//! syndrome, and looked up per block with a binary search.

use crate::channel::receiver_front_end;
use crate::decoders::Decoder;
use crate::error::{Error, Result};
use crate::gf2::{BitVector, LinearCode};

/// Upper bound on the number of stored patterns, Σ_{i≤t} C(n, i).
pub const MAX_TABLE_ENTRIES: u64 = 100_000_000;

/// Syndrome-indexed table of all minimal-weight error patterns of weight ≤ t.
///
/// Because `2t < d_min`, two distinct patterns of weight ≤ t can never share
/// a syndrome, so the table is injective; construction verifies this.
pub struct BddTable {
    code: LinearCode,
    /// `(packed syndrome, offset, weight)` sorted by syndrome; the pattern's
    /// error positions live at `positions[offset..offset + weight]`.
    index: Vec<(u64, u32, u8)>,
    positions: Vec<u16>,
}

impl BddTable {
    /// Enumerates every error pattern of weight ≤ t in increasing weight and
    /// stores it under its syndrome.
    pub fn build(code: &LinearCode) -> Result<Self> {
        let n = code.n();
        let t = code.t() as usize;
        let entries = bounded_pattern_count(n as u64, t as u64, MAX_TABLE_ENTRIES)
            .ok_or_else(|| {
                Error::Capacity(format!(
                    "syndrome table for n = {n}, t = {t} exceeds {MAX_TABLE_ENTRIES} entries"
                ))
            })?;
        let nk = n - code.k();
        if nk > 64 {
            return Err(Error::Capacity(format!(
                "syndrome has {nk} bits; packed table keys support at most 64"
            )));
        }
        // Syndrome of a single-bit error at each position.
        let mut col = vec![0u64; n];
        for (j, slot) in col.iter_mut().enumerate() {
            let mut unit = BitVector::zeros(n);
            unit.set(j, true);
            *slot = code.syndrome(&unit)?.as_u64();
        }
        let mut index = Vec::with_capacity(entries as usize);
        let mut positions: Vec<u16> = Vec::new();
        // Weight 0: the zero syndrome maps to the empty pattern.
        index.push((0u64, 0u32, 0u8));
        for w in 1..=t {
            let mut combo: Vec<usize> = (0..w).collect();
            loop {
                let mut key = 0u64;
                for &p in &combo {
                    key ^= col[p];
                }
                let offset = positions.len() as u32;
                positions.extend(combo.iter().map(|&p| p as u16));
                index.push((key, offset, w as u8));
                if !next_combination(&mut combo, n) {
                    break;
                }
            }
        }
        debug_assert_eq!(index.len() as u64, entries);
        index.sort_unstable_by_key(|&(key, _, _)| key);
        for pair in index.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::Construction(format!(
                    "two error patterns of weight <= {t} share a syndrome; \
                     the declared minimum distance is inconsistent with the code"
                )));
            }
        }
        Ok(Self {
            code: code.clone(),
            index,
            positions,
        })
    }

    /// Code this table was built for.
    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    /// Number of stored syndrome → pattern entries, Σ_{i≤t} C(n, i).
    pub fn len(&self) -> usize {
        self.index.len()
    }

    /// True when the table holds no entries (never the case after `build`,
    /// which always stores the zero-weight pattern).
    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Correct `y_b` by the stored pattern for its syndrome.
    ///
    /// Returns the corrected word and `true` when the syndrome was present
    /// (error weight ≤ t, or a miscorrection onto the wrong codeword); an
    /// absent syndrome returns `y_b` unchanged and `false`.
    ///
    /// # Panics
    ///
    /// Panics if `y_b.len() != n`.
    pub fn decode(&self, y_b: &BitVector) -> (BitVector, bool) {
        assert_eq!(y_b.len(), self.code.n(), "received block length mismatch");
        let key = self
            .code
            .syndrome(y_b)
            .expect("length checked above")
            .as_u64();
        match self.index.binary_search_by_key(&key, |&(k, _, _)| k) {
            Ok(i) => {
                let (_, offset, weight) = self.index[i];
                let mut c_hat = y_b.clone();
                let start = offset as usize;
                for &p in &self.positions[start..start + weight as usize] {
                    c_hat.flip(p as usize);
                }
                (c_hat, true)
            }
            Err(_) => (y_b.clone(), false),
        }
    }
}

impl Decoder for BddTable {
    fn block_len(&self) -> usize {
        self.code.n()
    }

    fn decode_block(&self, y: &[f64]) -> (BitVector, usize) {
        let (y_b, _) = receiver_front_end(y);
        (self.decode(&y_b).0, 0)
    }
}

/// Σ_{i≤t} C(n, i), or `None` as soon as the running total exceeds `cap`.
fn bounded_pattern_count(n: u64, t: u64, cap: u64) -> Option<u64> {
    let mut total: u64 = 0;
    let mut term: u128 = 1;
    for i in 0..=t {
        if i > 0 {
            // C(n, i) = C(n, i-1) · (n - i + 1) / i, exact in this order.
            term = term * (n - i + 1) as u128 / i as u128;
        }
        if term > cap as u128 {
            return None;
        }
        total = total.saturating_add(term as u64);
        if total > cap {
            return None;
        }
    }
    Some(total)
}

/// Advance `combo` to the next position set in lexicographic order; returns
/// `false` once the last combination has been consumed.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let w = combo.len();
    let mut i = w;
    while i > 0 {
        i -= 1;
        if combo[i] < n - w + i {
            combo[i] += 1;
            for j in i + 1..w {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
