//! Block decoders for the BI-AWGN channel: the single-shot neural syndrome
//! decoder, its iterative error-decimation wrapper, and two classical
//! baselines (a syndrome-table bounded-distance decoder and a brute-force
//! maximum-likelihood oracle).
//!
//! Every decoder is immutable once constructed; `decode` takes `&self` and is
//! safe to call from many threads sharing one model or table.

mod bdd;
mod ied;
mod ml;
mod sbnd;

pub use bdd::BddTable;
pub use ied::IedDecoder;
pub use ml::{ml_decode_bruteforce, MlDecoder, ML_MAX_K};
pub use sbnd::SbndDecoder;

use crate::gf2::BitVector;
use crate::neural::{Mlp, Tensor2};

/// Hard-decision threshold applied to per-bit error estimates: position `j`
/// is declared in error when the estimate exceeds this value.
pub const ERROR_THRESHOLD: f64 = 0.5;

/// Source of per-bit error-probability estimates given a syndrome and the
/// channel reliabilities.
///
/// [`Mlp`] is the production implementation; tests substitute canned
/// estimators to pin decoder behavior independently of any training run.
pub trait ErrorEstimator: Sync {
    /// Width of the concatenated `(s, r)` input row the estimator expects,
    /// i.e. `(n − k) + n` for the code it was built for.
    fn estimator_input_dim(&self) -> usize;

    /// Number of per-bit estimates produced (the block length `n`).
    fn estimator_output_dim(&self) -> usize;

    /// Estimate `P[e_j = 1 | (s, r)]` for every position `j`.
    ///
    /// `s` holds the syndrome bits as 0.0/1.0 values and `r` the channel
    /// reliabilities `|y|`; both must match the declared dimensions.
    fn estimate(&self, s: &[f64], r: &[f64]) -> Vec<f64>;
}

impl<E: ErrorEstimator + ?Sized> ErrorEstimator for &E {
    fn estimator_input_dim(&self) -> usize {
        (**self).estimator_input_dim()
    }

    fn estimator_output_dim(&self) -> usize {
        (**self).estimator_output_dim()
    }

    fn estimate(&self, s: &[f64], r: &[f64]) -> Vec<f64> {
        (**self).estimate(s, r)
    }
}

impl ErrorEstimator for Mlp {
    fn estimator_input_dim(&self) -> usize {
        self.input_dim()
    }

    fn estimator_output_dim(&self) -> usize {
        self.output_dim()
    }

    fn estimate(&self, s: &[f64], r: &[f64]) -> Vec<f64> {
        let mut row = Vec::with_capacity(s.len() + r.len());
        row.extend_from_slice(s);
        row.extend_from_slice(r);
        let x = Tensor2::from_vec(1, row.len(), row);
        // Finite inputs through finite parameters cannot fault; a fault here
        // means the model itself is corrupt, which is not recoverable at the
        // per-block level.
        let out = self
            .infer(&x)
            .expect("inference produced non-finite values from a finite input");
        out.data().to_vec()
    }
}

/// Result of one neural decode: the codeword estimate plus the bookkeeping
/// the evaluation harness needs for iteration accounting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    /// Estimated codeword.
    pub c_hat: BitVector,
    /// Number of decoding iterations entered, in `1..=T`.
    pub iterations_used: usize,
    /// Whether decoding stopped because the hard decisions already formed a
    /// codeword (no network call happens in that final iteration).
    pub syndrome_zero_exit: bool,
    /// Positions whose received sign was flipped, one per decimation step,
    /// in the order the flips were applied.
    pub flipped_positions: Vec<usize>,
}

impl DecodeOutcome {
    /// Number of network invocations spent on this block: every iteration
    /// runs the model exactly once, except a zero-syndrome exit which skips
    /// it.
    pub fn model_calls(&self) -> usize {
        self.iterations_used - usize::from(self.syndrome_zero_exit)
    }
}

/// Uniform harness-facing interface: map one received block to a codeword
/// estimate and the number of network calls it cost (zero for the classical
/// decoders).
pub trait Decoder: Sync {
    /// Block length `n` this decoder expects.
    fn block_len(&self) -> usize;

    /// Decode one received block of channel outputs.
    fn decode_block(&self, y: &[f64]) -> (BitVector, usize);
}
