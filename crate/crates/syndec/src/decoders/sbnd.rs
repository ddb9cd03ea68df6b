//! Single-shot neural syndrome decoding: hard-decide the received block,
//! compute its syndrome, and — when the syndrome is nonzero — correct the
//! positions whose estimated error probability exceeds the threshold.

use crate::channel::receiver_front_end;
use crate::decoders::{DecodeOutcome, Decoder, ErrorEstimator, ERROR_THRESHOLD};
use crate::error::{Error, Result};
use crate::gf2::{BitVector, LinearCode};
use crate::neural::Mlp;

/// Neural decoder that estimates the channel error pattern from the syndrome
/// and reliability vector, then applies the full correction in one shot.
pub struct SbndDecoder<E: ErrorEstimator = Mlp> {
    code: LinearCode,
    model: E,
    threshold: f64,
}

impl<E: ErrorEstimator> SbndDecoder<E> {
    /// Pairs a code with an error estimator, checking that the estimator's
    /// input width is `(n − k) + n` and its output width is `n`.
    pub fn new(code: LinearCode, model: E) -> Result<Self> {
        let expected = (code.n() - code.k()) + code.n();
        if model.estimator_input_dim() != expected {
            return Err(Error::Config(format!(
                "estimator input width {} does not match (n-k)+n = {} for the ({}, {}) code",
                model.estimator_input_dim(),
                expected,
                code.n(),
                code.k(),
            )));
        }
        if model.estimator_output_dim() != code.n() {
            return Err(Error::Config(format!(
                "estimator output width {} does not match n = {}",
                model.estimator_output_dim(),
                code.n(),
            )));
        }
        Ok(Self {
            code,
            model,
            threshold: ERROR_THRESHOLD,
        })
    }

    /// Code this decoder was built for.
    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    /// Underlying error estimator.
    pub fn model(&self) -> &E {
        &self.model
    }

    /// Hard-decision threshold on the per-bit estimates.
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Decode one received block as `ĉ = y_b ⊕ 1[ẽ > 0.5]`, skipping the
    /// network entirely when the hard decisions already form a codeword.
    ///
    /// # Panics
    ///
    /// Panics if `y.len() != n`.
    pub fn decode(&self, y: &[f64]) -> DecodeOutcome {
        assert_eq!(y.len(), self.code.n(), "received block length mismatch");
        let (y_b, r) = receiver_front_end(y);
        let s = self.code.syndrome(&y_b).expect("length checked above");
        if s.is_zero() {
            return DecodeOutcome {
                c_hat: y_b,
                iterations_used: 1,
                syndrome_zero_exit: true,
                flipped_positions: Vec::new(),
            };
        }
        let s_bits: Vec<f64> = s.iter_bits().map(f64::from).collect();
        let e_tilde = self.model.estimate(&s_bits, &r);
        let mut c_hat = y_b;
        for (j, &p) in e_tilde.iter().enumerate() {
            if p > self.threshold {
                c_hat.flip(j);
            }
        }
        DecodeOutcome {
            c_hat,
            iterations_used: 1,
            syndrome_zero_exit: false,
            flipped_positions: Vec::new(),
        }
    }
}

impl<E: ErrorEstimator> Decoder for SbndDecoder<E> {
    fn block_len(&self) -> usize {
        self.code.n()
    }

    fn decode_block(&self, y: &[f64]) -> (BitVector, usize) {
        let out = self.decode(y);
        let calls = out.model_calls();
        (out.c_hat, calls)
    }
}
