//! Brute-force maximum-likelihood decoding over the full codebook. Exact but
//! exponential in the code dimension, so construction is guarded to small
//! codes; useful as an optimality reference for other decoders.

use crate::decoders::Decoder;
use crate::error::{Error, Result};
use crate::gf2::{BitVector, LinearCode};

/// Largest code dimension accepted: `2^k` codewords must stay enumerable.
pub const ML_MAX_K: usize = 20;

/// Exhaustive maximum-likelihood decoder for the BI-AWGN channel.
///
/// Holds all `2^k` codewords packed into words, indexed by the message read
/// as an integer (bit `j` of the index is message bit `j`).
pub struct MlDecoder {
    code: LinearCode,
    codewords: Vec<u64>,
    words_per_cw: usize,
}

impl MlDecoder {
    /// Expands the full codebook; rejects codes with `k > 20`.
    pub fn new(code: &LinearCode) -> Result<Self> {
        if code.k() > ML_MAX_K {
            return Err(Error::Capacity(format!(
                "maximum-likelihood search needs 2^{} codewords; dimensions above {} are refused",
                code.k(),
                ML_MAX_K,
            )));
        }
        let words_per_cw = code.n().div_ceil(64);
        let total = 1usize << code.k();
        let mut codewords = vec![0u64; total * words_per_cw];
        // Index u extends index u & (u-1) (u with its lowest set bit cleared)
        // by exactly one generator row, so each codeword is one XOR away from
        // an already-computed one.
        let mut scratch = vec![0u64; words_per_cw];
        for u in 1..total {
            let prev = u & (u - 1);
            let row = code.generator().row_words(u.trailing_zeros() as usize);
            scratch.copy_from_slice(&codewords[prev * words_per_cw..(prev + 1) * words_per_cw]);
            for (dst, &src) in scratch.iter_mut().zip(row) {
                *dst ^= src;
            }
            codewords[u * words_per_cw..(u + 1) * words_per_cw].copy_from_slice(&scratch);
        }
        Ok(Self {
            code: code.clone(),
            codewords,
            words_per_cw,
        })
    }

    /// Code this decoder was built for.
    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    /// Most likely codeword under BI-AWGN: maximizes the correlation
    /// `Σ y_i (1 − 2c_i)`, equivalently minimizes `‖y − (1 − 2c)‖²`. Ties
    /// resolve to the smallest message index.
    ///
    /// # Panics
    ///
    /// Panics if `y.len() != n`.
    pub fn decode(&self, y: &[f64]) -> BitVector {
        let n = self.code.n();
        assert_eq!(y.len(), n, "received block length mismatch");
        // Σ y_i (1 - 2c_i) = Σ y_i - 2 Σ_{i : c_i = 1} y_i.
        let total: f64 = y.iter().sum();
        let mut best_u = 0usize;
        let mut best_corr = f64::NEG_INFINITY;
        for u in 0..(1usize << self.code.k()) {
            let words = &self.codewords[u * self.words_per_cw..(u + 1) * self.words_per_cw];
            let mut on_sum = 0.0;
            for (w, &word) in words.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    on_sum += y[w * 64 + bits.trailing_zeros() as usize];
                    bits &= bits - 1;
                }
            }
            let corr = total - 2.0 * on_sum;
            if corr > best_corr {
                best_corr = corr;
                best_u = u;
            }
        }
        let words = &self.codewords[best_u * self.words_per_cw..(best_u + 1) * self.words_per_cw];
        let mut c_hat = BitVector::zeros(n);
        for (w, &word) in words.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                c_hat.set(w * 64 + bits.trailing_zeros() as usize, true);
                bits &= bits - 1;
            }
        }
        c_hat
    }
}

impl Decoder for MlDecoder {
    fn block_len(&self) -> usize {
        self.code.n()
    }

    fn decode_block(&self, y: &[f64]) -> (BitVector, usize) {
        (self.decode(y), 0)
    }
}

/// One-off exhaustive decode: builds the codebook, decodes a single block,
/// and discards the table. Prefer [`MlDecoder`] in loops.
pub fn ml_decode_bruteforce(code: &LinearCode, y: &[f64]) -> Result<BitVector> {
    Ok(MlDecoder::new(code)?.decode(y))
}
