//! The training loop: streamed channel batches, Adam, scheduled learning
//! rates, per-epoch validation, and best-model checkpointing.

use crate::channel::{make_training_batch, sigma_from_ebn0, SigmaMode};
use crate::error::{Error, Result};
use crate::gf2::LinearCode;
use crate::neural::loss::bce_loss;
use crate::neural::mlp::Mlp;
use crate::neural::optim::AdamState;
use crate::neural::schedule::LrSchedule;
use crate::neural::tensor::Tensor2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Where training examples come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataSource {
    /// Fresh examples drawn from the channel for every batch; nothing is
    /// ever reused, so overfitting to a finite sample is impossible.
    Stream,
    /// A fixed set of this many examples, generated once and cycled in
    /// order. One epoch is one pass over the set. Useful for overfitting
    /// sanity checks.
    Frozen(usize),
}

/// Hyperparameters of one training run.
#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub batch_size: usize,
    pub total_examples: u64,
    /// E_b/N_0 of the training channel, in decibels.
    pub train_ebn0_db: f64,
    pub sigma_mode: SigmaMode,
    pub validation_examples: usize,
    /// Number of batches that constitute one epoch when streaming
    /// (ignored for a frozen source, where an epoch is one pass).
    pub batches_per_epoch: usize,
    pub seed: u64,
    pub source: DataSource,
    /// Emit one line per epoch on standard error.
    pub progress: bool,
}

impl TrainConfig {
    /// The benchmark protocol: batches of 2048, 10⁷ streamed examples at
    /// 4 dB, 10⁵ validation examples, 488 batches (≈10⁶ examples) per epoch.
    pub fn standard(seed: u64) -> Self {
        Self {
            batch_size: 2048,
            total_examples: 10_000_000,
            train_ebn0_db: 4.0,
            sigma_mode: SigmaMode::RateNormalized,
            validation_examples: 100_000,
            batches_per_epoch: 488,
            seed,
            source: DataSource::Stream,
            progress: false,
        }
    }
}

/// One row of the training history.
#[derive(Debug, Clone)]
pub struct EpochRecord {
    /// 1-based epoch index.
    pub epoch: usize,
    pub train_loss: f64,
    pub val_loss: f64,
    /// Learning rate in effect at the start of the epoch.
    pub lr: f64,
}

/// Result of a training run.
#[derive(Debug)]
pub struct TrainOutcome {
    /// Parameters with the best validation loss seen (the starting
    /// parameters if no epoch completed).
    pub model: Mlp,
    pub history: Vec<EpochRecord>,
    pub best_val_loss: f64,
    /// Set when a numeric fault aborted the run early; `model` then holds
    /// the last good checkpoint.
    pub fault: Option<Error>,
}

/// Generate the seed-frozen validation set used for a given seed: inputs and
/// targets as row-major tensors.
pub fn validation_set(
    code: &LinearCode,
    sigma: f64,
    examples: usize,
    seed: u64,
) -> (Tensor2, Tensor2) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let batch = make_training_batch(code, sigma, examples, &mut rng);
    (
        Tensor2::from_vec(examples, batch.input_dim, batch.inputs),
        Tensor2::from_vec(examples, batch.output_dim, batch.targets),
    )
}

/// Mean BCE of the model (inference mode) over a dataset, evaluated in
/// row chunks to bound memory.
pub fn validation_bce(model: &Mlp, inputs: &Tensor2, targets: &Tensor2, chunk: usize) -> Result<f64> {
    assert!(chunk >= 1);
    let rows = inputs.rows();
    let mut weighted = 0.0;
    let mut from = 0;
    while from < rows {
        let to = (from + chunk).min(rows);
        let x = inputs.slice_rows(from, to);
        let t = targets.slice_rows(from, to);
        let out = model.infer(&x)?;
        weighted += bce_loss(&out, &t)? * (to - from) as f64;
        from = to;
    }
    Ok(weighted / rows as f64)
}

/// Train `model` on zero-codeword channel batches for `code`.
///
/// Returns the best-validation-loss parameters together with the per-epoch
/// history. A numeric fault (NaN/Inf in activations, gradients, or losses)
/// stops the run and is reported in [`TrainOutcome::fault`] with the last
/// good checkpoint retained; configuration errors fail outright.
pub fn train(
    model: Mlp,
    code: &LinearCode,
    config: &TrainConfig,
    schedule: &mut LrSchedule,
) -> Result<TrainOutcome> {
    let expected_input = (code.n() - code.k()) + code.n();
    if model.input_dim() != expected_input {
        return Err(Error::Config(format!(
            "model input width {} does not match code ({} expected)",
            model.input_dim(),
            expected_input
        )));
    }
    if model.output_dim() != code.n() {
        return Err(Error::Config(format!(
            "model output width {} does not match code length {}",
            model.output_dim(),
            code.n()
        )));
    }
    if config.batch_size == 0 || config.total_examples < config.batch_size as u64 {
        return Err(Error::Config(
            "total examples must cover at least one batch".into(),
        ));
    }
    if config.batches_per_epoch == 0 {
        return Err(Error::Config("batches per epoch must be positive".into()));
    }
    let sigma = sigma_from_ebn0(config.train_ebn0_db, code.rate(), config.sigma_mode)?;

    let (val_x, val_t) = validation_set(code, sigma, config.validation_examples.max(1), config.seed);

    // Pre-generate a frozen dataset if requested; otherwise stream.
    let mut train_rng = ChaCha8Rng::seed_from_u64(config.seed);
    train_rng.set_stream(0);
    let frozen: Option<(Tensor2, Tensor2)> = match config.source {
        DataSource::Stream => None,
        DataSource::Frozen(examples) => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(2);
            let b = make_training_batch(code, sigma, examples.max(1), &mut rng);
            Some((
                Tensor2::from_vec(examples.max(1), b.input_dim, b.inputs),
                Tensor2::from_vec(examples.max(1), b.output_dim, b.targets),
            ))
        }
    };
    let batches_per_epoch = match &frozen {
        None => config.batches_per_epoch,
        Some((x, _)) => x.rows().div_ceil(config.batch_size),
    };
    let total_batches = (config.total_examples / config.batch_size as u64).max(1) as usize;
    let epochs = total_batches.div_ceil(batches_per_epoch);

    let mut model = model;
    let mut checkpoint = model.clone();
    let mut best_val_loss = f64::INFINITY;
    let mut adam = AdamState::new(&model.trainable_lens());
    let mut history = Vec::with_capacity(epochs);
    let mut batches_done = 0usize;

    let fault = 'run: {
        for epoch in 1..=epochs {
            let epoch_batches = batches_per_epoch.min(total_batches - batches_done);
            let epoch_start_lr = match schedule {
                LrSchedule::Plateau(p) => p.lr(),
                LrSchedule::Triangular(t) => t.lr_at(batches_done as u64),
            };
            let mut loss_sum = 0.0;
            for b in 0..epoch_batches {
                let (x, t) = match &frozen {
                    None => {
                        let raw =
                            make_training_batch(code, sigma, config.batch_size, &mut train_rng);
                        (
                            Tensor2::from_vec(config.batch_size, raw.input_dim, raw.inputs),
                            Tensor2::from_vec(config.batch_size, raw.output_dim, raw.targets),
                        )
                    }
                    Some((fx, ft)) => {
                        let from = (b * config.batch_size) % fx.rows();
                        let to = (from + config.batch_size).min(fx.rows());
                        (fx.slice_rows(from, to), ft.slice_rows(from, to))
                    }
                };
                let lr = match schedule {
                    LrSchedule::Plateau(p) => p.lr(),
                    LrSchedule::Triangular(t) => t.lr_at(batches_done as u64),
                };
                let (out, cache) = match model.forward_cached(&x) {
                    Ok(v) => v,
                    Err(e) => break 'run Some(e),
                };
                let loss = match bce_loss(&out, &t) {
                    Ok(l) if l.is_finite() => l,
                    Ok(_) => {
                        break 'run Some(Error::NumericFault {
                            layer: model.specs().len(),
                            detail: "non-finite training loss".into(),
                        })
                    }
                    Err(e) => break 'run Some(e),
                };
                let grads = match model.backward_bce(&cache, &t) {
                    Ok(g) => g,
                    Err(e) => break 'run Some(e),
                };
                for (li, g) in grads.iter().enumerate() {
                    for s in g.slices() {
                        if !s.iter().all(|v| v.is_finite()) {
                            break 'run Some(Error::NumericFault {
                                layer: li,
                                detail: "non-finite gradient".into(),
                            });
                        }
                    }
                }
                let grad_slices: Vec<&[f64]> =
                    grads.iter().flat_map(|g| g.slices()).collect();
                let mut params = model.trainable_params_mut();
                adam.step(&mut params, &grad_slices, lr);
                model.absorb_batch_stats(&cache);
                loss_sum += loss;
                batches_done += 1;
            }
            let val_loss = match validation_bce(&model, &val_x, &val_t, 2048) {
                Ok(v) if v.is_finite() => v,
                Ok(_) => {
                    break 'run Some(Error::NumericFault {
                        layer: model.specs().len(),
                        detail: "non-finite validation loss".into(),
                    })
                }
                Err(e) => break 'run Some(e),
            };
            history.push(EpochRecord {
                epoch,
                train_loss: loss_sum / epoch_batches as f64,
                val_loss,
                lr: epoch_start_lr,
            });
            if config.progress {
                eprintln!(
                    "epoch {epoch}/{epochs}: train {:.5e} val {val_loss:.5e} lr {epoch_start_lr:.5e}",
                    loss_sum / epoch_batches as f64,
                );
            }
            if val_loss < best_val_loss {
                best_val_loss = val_loss;
                checkpoint = model.clone();
            }
            if let LrSchedule::Plateau(p) = schedule {
                p.observe(val_loss);
            }
        }
        None
    };

    Ok(TrainOutcome {
        model: checkpoint,
        history,
        best_val_loss,
        fault,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::bch_construct;
    use crate::neural::arch::{build_architecture, ArchVariant};
    use crate::neural::layer::Activation;
    use crate::neural::schedule::PlateauSchedule;

    fn hamming_model(seed: u64) -> (crate::gf2::LinearCode, Mlp) {
        let code = bch_construct(3, 1).unwrap(); // the (7,4) Hamming code
        let model = build_architecture(
            &code,
            &ArchVariant::Custom {
                hidden: vec![16, 16],
                activation: Activation::Relu,
                batch_norm: false,
            },
            seed,
        )
        .unwrap();
        (code, model)
    }

    #[test]
    fn frozen_set_loss_halves() {
        let (code, model) = hamming_model(1);
        let config = TrainConfig {
            batch_size: 512,
            total_examples: 512 * 200,
            train_ebn0_db: 4.0,
            sigma_mode: SigmaMode::RateNormalized,
            validation_examples: 512,
            batches_per_epoch: 1,
            seed: 5,
            source: DataSource::Frozen(512),
            progress: false,
        };
        let mut schedule = LrSchedule::Plateau(PlateauSchedule::standard());
        let out = train(model, &code, &config, &mut schedule).unwrap();
        assert!(out.fault.is_none());
        assert_eq!(out.history.len(), 200);
        let first = out.history.first().unwrap().train_loss;
        let last = out.history.last().unwrap().train_loss;
        assert!(
            last < 0.5 * first,
            "training loss {first} -> {last} did not halve"
        );
    }

    #[test]
    fn identical_seeds_identical_parameters() {
        let config = TrainConfig {
            batch_size: 64,
            total_examples: 64 * 6,
            train_ebn0_db: 4.0,
            sigma_mode: SigmaMode::RateNormalized,
            validation_examples: 128,
            batches_per_epoch: 2,
            seed: 9,
            source: DataSource::Stream,
            progress: false,
        };
        let mut results = Vec::new();
        for _ in 0..2 {
            let (code, model) = hamming_model(3);
            let mut schedule = LrSchedule::Plateau(PlateauSchedule::standard());
            let out = train(model, &code, &config, &mut schedule).unwrap();
            let flat: Vec<f64> = out
                .model
                .all_tensors()
                .iter()
                .flat_map(|s| s.iter().copied())
                .collect();
            results.push((flat, out.best_val_loss));
        }
        assert_eq!(results[0].0, results[1].0);
        assert_eq!(results[0].1, results[1].1);
    }

    #[test]
    fn numeric_fault_keeps_checkpoint() {
        let (code, mut model) = hamming_model(2);
        model.trainable_params_mut()[0][0] = f64::NAN; // poison the first dense layer
        // Compare bit patterns so the poisoned NaN entry still compares equal.
        let before: Vec<u64> = model
            .all_tensors()
            .iter()
            .flat_map(|s| s.iter().map(|x| x.to_bits()))
            .collect();
        let config = TrainConfig {
            batch_size: 32,
            total_examples: 64,
            train_ebn0_db: 4.0,
            sigma_mode: SigmaMode::RateNormalized,
            validation_examples: 32,
            batches_per_epoch: 2,
            seed: 4,
            source: DataSource::Stream,
            progress: false,
        };
        let mut schedule = LrSchedule::Plateau(PlateauSchedule::standard());
        let out = train(model, &code, &config, &mut schedule).unwrap();
        assert!(matches!(out.fault, Some(Error::NumericFault { .. })));
        assert!(out.history.is_empty());
        let after: Vec<u64> = out
            .model
            .all_tensors()
            .iter()
            .flat_map(|s| s.iter().map(|x| x.to_bits()))
            .collect();
        assert_eq!(before, after, "checkpoint should be the pre-fault parameters");
    }

    #[test]
    fn rejects_model_code_mismatch() {
        let code_a = bch_construct(3, 1).unwrap();
        let (_, model_for_a) = hamming_model(0);
        let code_b = bch_construct(4, 3).unwrap();
        let config = TrainConfig {
            batch_size: 8,
            total_examples: 8,
            train_ebn0_db: 4.0,
            sigma_mode: SigmaMode::RateNormalized,
            validation_examples: 8,
            batches_per_epoch: 1,
            seed: 0,
            source: DataSource::Stream,
            progress: false,
        };
        let mut schedule = LrSchedule::Plateau(PlateauSchedule::standard());
        assert!(train(model_for_a.clone(), &code_b, &config, &mut schedule).is_err());
        assert!(train(model_for_a, &code_a, &config, &mut schedule).is_ok());
    }

    #[test]
    fn epoch_accounting_for_streamed_runs() {
        let (code, model) = hamming_model(6);
        let config = TrainConfig {
            batch_size: 32,
            total_examples: 32 * 10,
            train_ebn0_db: 4.0,
            sigma_mode: SigmaMode::RateNormalized,
            validation_examples: 32,
            batches_per_epoch: 4,
            seed: 2,
            source: DataSource::Stream,
            progress: false,
        };
        let mut schedule = LrSchedule::Triangular(crate::neural::schedule::TriangularSchedule::standard());
        let out = train(model, &code, &config, &mut schedule).unwrap();
        // 10 batches at 4 per epoch -> epochs of 4, 4, 2
        assert_eq!(out.history.len(), 3);
        assert_eq!(out.history[0].epoch, 1);
        assert_eq!(out.history[2].epoch, 3);
    }
}
