//! Iterative error decimation: between network passes, flip the received
//! sign at the single most suspect position and re-derive the syndrome, so
//! each pass faces a strictly simpler residual error; only the final pass
//! applies the 0.5 threshold.

use crate::channel::receiver_front_end;
use crate::decoders::{DecodeOutcome, Decoder, ErrorEstimator, SbndDecoder};
use crate::error::{Error, Result};
use crate::gf2::{BitVector, LinearCode};
use crate::neural::Mlp;

/// Iterative wrapper around a single-shot neural syndrome decoder.
///
/// Runs up to `t_max` iterations. Each iteration hard-decides the working
/// vector and stops if the syndrome is zero; otherwise it queries the
/// estimator and, unless this is the last iteration, flips the sign of the
/// most confident error position (magnitudes are never altered). The last
/// iteration thresholds the estimate and applies the full correction.
pub struct IedDecoder<E: ErrorEstimator = Mlp> {
    sbnd: SbndDecoder<E>,
    t_max: usize,
}

impl<E: ErrorEstimator> IedDecoder<E> {
    /// Wraps a single-shot decoder with an iteration budget of `t_max ≥ 1`.
    pub fn new(sbnd: SbndDecoder<E>, t_max: usize) -> Result<Self> {
        if t_max < 1 {
            return Err(Error::Range(
                "iteration budget must be at least 1".into(),
            ));
        }
        Ok(Self { sbnd, t_max })
    }

    /// Maximum number of iterations.
    pub fn t_max(&self) -> usize {
        self.t_max
    }

    /// The wrapped single-shot decoder.
    pub fn sbnd(&self) -> &SbndDecoder<E> {
        &self.sbnd
    }

    /// Code this decoder was built for.
    pub fn code(&self) -> &LinearCode {
        self.sbnd.code()
    }

    /// Decode one received block with up to `t_max` decimation passes.
    ///
    /// With `t_max = 1` this is exactly the single-shot decode.
    ///
    /// # Panics
    ///
    /// Panics if `y.len() != n`.
    pub fn decode(&self, y: &[f64]) -> DecodeOutcome {
        let code = self.sbnd.code();
        assert_eq!(y.len(), code.n(), "received block length mismatch");
        let mut y_work = y.to_vec();
        // Sign flips never change a magnitude, so the reliability vector is
        // fixed for the whole decode.
        let (_, r) = receiver_front_end(y);
        let mut flipped = Vec::new();
        let mut y_b = BitVector::zeros(code.n());
        let mut e_tilde = Vec::new();
        for i in 1..=self.t_max {
            y_b = receiver_front_end(&y_work).0;
            let s = code.syndrome(&y_b).expect("length checked above");
            if s.is_zero() {
                return DecodeOutcome {
                    c_hat: y_b,
                    iterations_used: i,
                    syndrome_zero_exit: true,
                    flipped_positions: flipped,
                };
            }
            let s_bits: Vec<f64> = s.iter_bits().map(f64::from).collect();
            e_tilde = self.sbnd.model().estimate(&s_bits, &r);
            if i < self.t_max {
                let j = argmax(&e_tilde);
                y_work[j] = -y_work[j];
                flipped.push(j);
            }
        }
        // Budget exhausted with a live syndrome: threshold the last estimate
        // against the hard decisions from the final pass.
        let mut c_hat = y_b;
        for (j, &p) in e_tilde.iter().enumerate() {
            if p > self.sbnd.threshold() {
                c_hat.flip(j);
            }
        }
        DecodeOutcome {
            c_hat,
            iterations_used: self.t_max,
            syndrome_zero_exit: false,
            flipped_positions: flipped,
        }
    }
}

/// Index of the largest value; ties resolve to the lowest index.
fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (j, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = j;
        }
    }
    best
}

impl<E: ErrorEstimator> Decoder for IedDecoder<E> {
    fn block_len(&self) -> usize {
        self.sbnd.code().n()
    }

    fn decode_block(&self, y: &[f64]) -> (BitVector, usize) {
        let out = self.decode(y);
        let calls = out.model_calls();
        (out.c_hat, calls)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoders::test_estimators::{
        FixedEstimator, HashEstimator, PanickingEstimator, RecordingEstimator,
        AMBIGUOUS_ESTIMATE,
    };
    use crate::gf2::bch_construct;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn code15() -> LinearCode {
        bch_construct(4, 3).unwrap()
    }

    fn received_with_errors(n: usize, err: &[usize]) -> Vec<f64> {
        let mut y = vec![1.0; n];
        for &j in err {
            y[j] = -1.0;
        }
        y
    }

    #[test]
    fn rejects_zero_iteration_budget() {
        let sbnd = SbndDecoder::new(
            code15(),
            FixedEstimator {
                input_dim: 25,
                output: vec![0.0; 15],
            },
        )
        .unwrap();
        assert!(matches!(IedDecoder::new(sbnd, 0), Err(Error::Range(_))));
    }

    #[test]
    fn zero_syndrome_at_entry_exits_immediately() {
        let sbnd =
            SbndDecoder::new(code15(), PanickingEstimator { n: 15, nk: 10 }).unwrap();
        let ied = IedDecoder::new(sbnd, 3).unwrap();
        // All-ones is a codeword of the (15,5) code.
        let out = ied.decode(&[-1.0; 15]);
        assert!(out.syndrome_zero_exit);
        assert_eq!(out.iterations_used, 1);
        assert_eq!(out.model_calls(), 0);
        assert!(out.flipped_positions.is_empty());
        assert_eq!(out.c_hat.weight(), 15);
    }

    #[test]
    fn flips_most_confident_position_between_passes() {
        let est = RecordingEstimator::new(FixedEstimator {
            input_dim: 25,
            output: AMBIGUOUS_ESTIMATE.to_vec(),
        });
        let sbnd = SbndDecoder::new(code15(), est).unwrap();
        let ied = IedDecoder::new(sbnd, 2).unwrap();
        let y = received_with_errors(15, &[3]);
        let out = ied.decode(&y);
        // The largest estimate is 0.516 at index 7, so that sign is flipped
        // after the first pass; two hard-decision errors remain, so the
        // second pass thresholds.
        assert_eq!(out.flipped_positions, vec![7]);
        assert_eq!(out.iterations_used, 2);
        assert!(!out.syndrome_zero_exit);
        assert_eq!(out.model_calls(), 2);
        // Expected output: hard decisions {3, 7} corrected by the
        // thresholded estimate {1, 2, 5, 7}.
        let mut expected = BitVector::zeros(15);
        for j in [1, 2, 3, 5] {
            expected.set(j, true);
        }
        assert_eq!(out.c_hat, expected);
        // The estimator saw identical reliabilities on both calls: flipping
        // changes only the sign, never the magnitude.
        let calls = ied.sbnd().model().calls.lock().unwrap();
        assert_eq!(calls.len(), 2);
        assert_eq!(calls[0].1, calls[1].1);
        assert_eq!(calls[0].1, vec![1.0; 15]);
        // The syndromes differ because the working vector changed.
        assert_ne!(calls[0].0, calls[1].0);
    }

    #[test]
    fn correct_single_flip_reaches_zero_syndrome() {
        // Estimator pointing at the true error position: one decimation pass
        // repairs the block and the next syndrome check exits early.
        let mut output = vec![0.0; 15];
        output[4] = 0.9;
        let sbnd = SbndDecoder::new(
            code15(),
            FixedEstimator {
                input_dim: 25,
                output,
            },
        )
        .unwrap();
        let ied = IedDecoder::new(sbnd, 3).unwrap();
        let out = ied.decode(&received_with_errors(15, &[4]));
        assert!(out.syndrome_zero_exit);
        assert_eq!(out.iterations_used, 2);
        assert_eq!(out.model_calls(), 1);
        assert_eq!(out.flipped_positions, vec![4]);
        assert!(out.c_hat.is_zero());
    }

    #[test]
    fn re_flipping_the_same_position_is_permitted() {
        // A constant estimate keeps pointing at position 2, which is not in
        // error: the second flip undoes the first and the final pass sees
        // the original hard decisions again.
        let mut output = vec![0.0; 15];
        output[2] = 0.9;
        let sbnd = SbndDecoder::new(
            code15(),
            FixedEstimator {
                input_dim: 25,
                output,
            },
        )
        .unwrap();
        let ied = IedDecoder::new(sbnd, 3).unwrap();
        let out = ied.decode(&received_with_errors(15, &[0]));
        assert_eq!(out.flipped_positions, vec![2, 2]);
        assert_eq!(out.iterations_used, 3);
        assert!(!out.syndrome_zero_exit);
        assert_eq!(out.model_calls(), 3);
        // Final correction: hard decisions {0} xor thresholded estimate {2}.
        let mut expected = BitVector::zeros(15);
        expected.set(0, true);
        expected.set(2, true);
        assert_eq!(out.c_hat, expected);
    }

    #[test]
    fn single_iteration_budget_matches_single_shot_decoder() {
        let code = code15();
        let sbnd_standalone =
            SbndDecoder::new(code.clone(), HashEstimator { n: 15, nk: 10 }).unwrap();
        let sbnd_wrapped =
            SbndDecoder::new(code, HashEstimator { n: 15, nk: 10 }).unwrap();
        let ied = IedDecoder::new(sbnd_wrapped, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let y: Vec<f64> = (0..15).map(|_| rng.gen_range(-2.0..2.0)).collect();
            assert_eq!(ied.decode(&y), sbnd_standalone.decode(&y));
        }
    }
}
