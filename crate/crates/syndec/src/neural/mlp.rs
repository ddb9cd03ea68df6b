//! The feed-forward network: layer sequencing, forward passes, and
//! backpropagation.
//!
//! The training-mode forward pass is pure — batch-norm layers compute batch
//! statistics into the returned cache without touching their running
//! estimates — and [`Mlp::absorb_batch_stats`] folds them in as a separate,
//! explicit step. Keeping the forward pass side-effect-free is what lets the
//! finite-difference gradient check probe exactly the function
//! backpropagation differentiates.

use crate::error::{Error, Result};
use crate::neural::layer::{Activation, BnCache, DenseLayer, Layer, LayerGrad, LayerSpec};
use crate::neural::layer::BatchNormLayer;
use crate::neural::loss::bce_loss;
use crate::neural::tensor::Tensor2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A sequential network with optional skip concatenations.
#[derive(Debug, Clone)]
pub struct Mlp {
    layers: Vec<Layer>,
    input_dim: usize,
    output_dim: usize,
    /// Indices of layers whose outputs feed a later concatenation.
    skip_sources: Vec<usize>,
}

/// Everything a backward pass needs from a training-mode forward pass.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    /// `activations[i]` is the input to layer `i`; the last entry is the
    /// network output.
    activations: Vec<Tensor2>,
    /// Batch statistics per batch-norm layer index.
    bn: Vec<Option<BnCache>>,
}

impl ForwardCache {
    pub fn output(&self) -> &Tensor2 {
        self.activations.last().expect("cache holds at least the input")
    }
}

impl Mlp {
    /// Validate a layer chain and initialize its parameters (Glorot-normal
    /// weights, zero biases, identity batch norm) from the given seed.
    pub fn from_specs(input_dim: usize, specs: &[LayerSpec], seed: u64) -> Result<Self> {
        if specs.is_empty() {
            return Err(Error::Config("network needs at least one layer".into()));
        }
        if input_dim == 0 {
            return Err(Error::Config("network input width must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut layers = Vec::with_capacity(specs.len());
        let mut widths = Vec::with_capacity(specs.len()); // output width per layer
        let mut skip_sources = Vec::new();
        let mut current = input_dim;
        for (i, spec) in specs.iter().enumerate() {
            let layer = match *spec {
                LayerSpec::Dense { inputs, outputs } => {
                    if inputs != current {
                        return Err(Error::Config(format!(
                            "layer {i}: dense expects {inputs} inputs but receives {current}"
                        )));
                    }
                    if outputs == 0 {
                        return Err(Error::Config(format!("layer {i}: zero-width dense layer")));
                    }
                    current = outputs;
                    Layer::Dense(DenseLayer::glorot_normal(inputs, outputs, &mut rng))
                }
                LayerSpec::BatchNorm { width } => {
                    if width != current {
                        return Err(Error::Config(format!(
                            "layer {i}: batch norm width {width} does not match incoming {current}"
                        )));
                    }
                    Layer::BatchNorm(BatchNormLayer::new(width))
                }
                LayerSpec::Activation { which } => Layer::Activation(which),
                LayerSpec::ConcatSkip { source } => {
                    if source >= i {
                        return Err(Error::Config(format!(
                            "layer {i}: concatenation source {source} does not precede it"
                        )));
                    }
                    skip_sources.push(source);
                    current += widths[source];
                    Layer::ConcatSkip { source }
                }
            };
            widths.push(current);
            layers.push(layer);
        }
        match layers.last() {
            Some(Layer::Activation(Activation::Sigmoid)) => {}
            _ => {
                return Err(Error::Config(
                    "network must end with a sigmoid output activation".into(),
                ))
            }
        }
        Ok(Self {
            layers,
            input_dim,
            output_dim: current,
            skip_sources,
        })
    }

    #[inline]
    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    #[inline]
    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn specs(&self) -> Vec<LayerSpec> {
        self.layers.iter().map(Layer::spec).collect()
    }

    /// Number of trainable parameters (dense weights/biases, batch-norm
    /// scale/shift; running statistics excluded).
    pub fn parameter_count(&self) -> usize {
        self.layers
            .iter()
            .flat_map(|l| l.trainable_lens())
            .sum()
    }

    /// All parameter tensors in serialization order.
    pub fn all_tensors(&self) -> Vec<&[f64]> {
        self.layers.iter().flat_map(|l| l.all_tensors()).collect()
    }

    /// Mutable views over the same tensors, for deserialization.
    pub fn all_tensors_mut(&mut self) -> Vec<&mut [f64]> {
        self.layers.iter_mut().flat_map(|l| l.all_tensors_mut()).collect()
    }

    /// Optimizer view: trainable slices in a fixed order.
    pub fn trainable_params_mut(&mut self) -> Vec<&mut [f64]> {
        self.layers.iter_mut().flat_map(|l| l.trainable_mut()).collect()
    }

    /// Shapes matching [`trainable_params_mut`](Self::trainable_params_mut).
    pub fn trainable_lens(&self) -> Vec<usize> {
        self.layers.iter().flat_map(|l| l.trainable_lens()).collect()
    }

    fn check_finite(y: &Tensor2, layer: usize) -> Result<()> {
        if y.all_finite() {
            Ok(())
        } else {
            Err(Error::NumericFault {
                layer,
                detail: "non-finite activation".into(),
            })
        }
    }

    /// Training-mode forward pass. Batch-norm layers normalize with the
    /// batch's own statistics; the statistics are captured in the cache and
    /// the model itself is not mutated.
    pub fn forward_cached(&self, x: &Tensor2) -> Result<(Tensor2, ForwardCache)> {
        if x.cols() != self.input_dim {
            return Err(Error::Dimension {
                what: "network input width",
                expected: self.input_dim,
                got: x.cols(),
            });
        }
        let mut activations = Vec::with_capacity(self.layers.len() + 1);
        activations.push(x.clone());
        let mut bn = vec![None; self.layers.len()];
        for (i, layer) in self.layers.iter().enumerate() {
            let x_in = activations.last().expect("nonempty");
            let y = match layer {
                Layer::Dense(d) => d.forward(x_in),
                Layer::BatchNorm(b) => {
                    let (y, cache) = b.forward_train(x_in);
                    bn[i] = Some(cache);
                    y
                }
                Layer::Activation(a) => {
                    let mut y = x_in.clone();
                    for v in y.data_mut() {
                        *v = a.apply(*v);
                    }
                    y
                }
                Layer::ConcatSkip { source } => x_in.concat_cols(&activations[source + 1]),
            };
            Self::check_finite(&y, i)?;
            activations.push(y);
        }
        let out = activations.last().expect("nonempty").clone();
        Ok((out, ForwardCache { activations, bn }))
    }

    /// Update running batch-norm statistics from a cached forward pass.
    pub fn absorb_batch_stats(&mut self, cache: &ForwardCache) {
        for (i, layer) in self.layers.iter_mut().enumerate() {
            if let (Layer::BatchNorm(b), Some(c)) = (layer, &cache.bn[i]) {
                b.absorb(c);
            }
        }
    }

    /// Inference-mode forward pass: batch norm uses running statistics; only
    /// skip-source activations are retained along the way.
    pub fn infer(&self, x: &Tensor2) -> Result<Tensor2> {
        if x.cols() != self.input_dim {
            return Err(Error::Dimension {
                what: "network input width",
                expected: self.input_dim,
                got: x.cols(),
            });
        }
        let mut current = x.clone();
        let mut saved: Vec<(usize, Tensor2)> = Vec::new();
        for (i, layer) in self.layers.iter().enumerate() {
            let y = match layer {
                Layer::Dense(d) => d.forward(&current),
                Layer::BatchNorm(b) => b.forward_infer(&current),
                Layer::Activation(a) => {
                    let mut y = current.clone();
                    for v in y.data_mut() {
                        *v = a.apply(*v);
                    }
                    y
                }
                Layer::ConcatSkip { source } => {
                    let src = saved
                        .iter()
                        .find(|(s, _)| s == source)
                        .map(|(_, t)| t)
                        .expect("skip source retained by construction");
                    current.concat_cols(src)
                }
            };
            Self::check_finite(&y, i)?;
            if self.skip_sources.contains(&i) {
                saved.push((i, y.clone()));
            }
            current = y;
        }
        Ok(current)
    }

    /// Backpropagate the mean BCE loss through a cached forward pass.
    ///
    /// The output sigmoid and the loss are differentiated jointly — the
    /// gradient at the final dense output is `(ẽ − e) / (batch · n)` — so no
    /// division by potentially saturated sigmoid outputs ever occurs.
    pub fn backward_bce(&self, cache: &ForwardCache, target: &Tensor2) -> Result<Vec<LayerGrad>> {
        let l = self.layers.len();
        if cache.activations.len() != l + 1 || cache.activations[0].cols() != self.input_dim {
            return Err(Error::Config(
                "stale forward cache: shape does not match this network".into(),
            ));
        }
        let out = cache.output();
        if out.rows() != target.rows() || out.cols() != target.cols() {
            return Err(Error::Dimension {
                what: "backward target shape",
                expected: out.rows() * out.cols(),
                got: target.rows() * target.cols(),
            });
        }
        let denom = (out.rows() * out.cols()) as f64;
        // Gradient at the input of the final sigmoid layer.
        let mut delta = Tensor2::zeros(out.rows(), out.cols());
        for ((d, &p), &t) in delta.data_mut().iter_mut().zip(out.data()).zip(target.data()) {
            *d = (p - t) / denom;
        }
        let mut grads = vec![LayerGrad::None; l];
        // Pending gradients to add when the walk reaches a given activation
        // index (used by concatenation splits).
        let mut extra: Vec<Option<Tensor2>> = vec![None; l + 1];
        for i in (0..l.saturating_sub(1)).rev() {
            if let Some(ex) = extra[i + 1].take() {
                for (d, e) in delta.data_mut().iter_mut().zip(ex.data()) {
                    *d += e;
                }
            }
            match &self.layers[i] {
                Layer::Dense(d) => {
                    let (dx, dw, db) = d.backward(&cache.activations[i], &delta);
                    grads[i] = LayerGrad::Dense { dw, db };
                    delta = dx;
                }
                Layer::BatchNorm(b) => {
                    let Some(bn_cache) = &cache.bn[i] else {
                        return Err(Error::Config(
                            "stale forward cache: missing batch statistics".into(),
                        ));
                    };
                    let (dx, dgamma, dbeta) = b.backward(&cache.activations[i], bn_cache, &delta);
                    grads[i] = LayerGrad::BatchNorm { dgamma, dbeta };
                    delta = dx;
                }
                Layer::Activation(Activation::Relu) => {
                    let x_in = &cache.activations[i];
                    for (d, &x) in delta.data_mut().iter_mut().zip(x_in.data()) {
                        if x <= 0.0 {
                            *d = 0.0;
                        }
                    }
                }
                Layer::Activation(Activation::Sigmoid) => {
                    let y = &cache.activations[i + 1];
                    for (d, &s) in delta.data_mut().iter_mut().zip(y.data()) {
                        *d *= s * (1.0 - s);
                    }
                }
                Layer::ConcatSkip { source } => {
                    let w1 = cache.activations[i].cols();
                    let dskip = delta.slice_cols(w1, delta.cols());
                    match &mut extra[source + 1] {
                        Some(existing) => {
                            for (a, b) in existing.data_mut().iter_mut().zip(dskip.data()) {
                                *a += b;
                            }
                        }
                        slot @ None => *slot = Some(dskip),
                    }
                    delta = delta.slice_cols(0, w1);
                }
            }
        }
        Ok(grads)
    }
}

/// Maximum relative disagreement between backpropagation and central finite
/// differences of the mean BCE loss, probed at every trainable parameter.
///
/// Intended for small models; each parameter costs two forward passes.
pub fn gradient_check(model: &Mlp, x: &Tensor2, target: &Tensor2, h: f64) -> Result<f64> {
    let (_, cache) = model.forward_cached(x)?;
    let grads = model.backward_bce(&cache, target)?;
    let flat_grads: Vec<Vec<f64>> = grads
        .iter()
        .flat_map(|g| g.slices().into_iter().map(<[f64]>::to_vec))
        .collect();

    let mut probe = model.clone();
    let mut max_err = 0.0f64;
    for (si, grad_slice) in flat_grads.iter().enumerate() {
        for (ei, &bp) in grad_slice.iter().enumerate() {
            let orig = probe.trainable_params_mut()[si][ei];
            probe.trainable_params_mut()[si][ei] = orig + h;
            let loss_plus = bce_loss(&probe.forward_cached(x)?.0, target)?;
            probe.trainable_params_mut()[si][ei] = orig - h;
            let loss_minus = bce_loss(&probe.forward_cached(x)?.0, target)?;
            probe.trainable_params_mut()[si][ei] = orig;
            let fd = (loss_plus - loss_minus) / (2.0 * h);
            let err = (fd - bp).abs() / f64::max(1e-6, fd.abs().max(bp.abs()));
            max_err = max_err.max(err);
        }
    }
    Ok(max_err)
}
