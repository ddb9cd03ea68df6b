//! Network layers: dense, batch normalization, activations, and skip
//! concatenation.
//!
//! Each layer exposes a pure forward pass plus the matching backward pass;
//! batch normalization returns its batch statistics separately so the caller
//! decides when (and whether) to fold them into the running estimates.

use crate::neural::tensor::{matmul_nn, matmul_tn, Tensor2};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Normalization epsilon inside the variance square root.
pub const BN_EPS: f64 = 1e-5;
/// Weight on the previous running estimate when folding in a new batch.
pub const BN_MOMENTUM: f64 = 0.99;

/// Elementwise nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Relu,
    Sigmoid,
}

impl Activation {
    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Relu => x.max(0.0),
            Activation::Sigmoid => {
                // Evaluate on the side that cannot overflow.
                if x >= 0.0 {
                    1.0 / (1.0 + (-x).exp())
                } else {
                    let e = x.exp();
                    e / (1.0 + e)
                }
            }
        }
    }
}

/// Shape-level description of a layer; parameters live in [`Layer`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerSpec {
    Dense { inputs: usize, outputs: usize },
    BatchNorm { width: usize },
    Activation { which: Activation },
    /// Concatenate the saved output of layer `source` onto the current
    /// activations (current first, saved second).
    ConcatSkip { source: usize },
}

/// Fully connected layer; `w` is `inputs × outputs`.
#[derive(Debug, Clone)]
pub struct DenseLayer {
    pub w: Tensor2,
    pub b: Vec<f64>,
}

impl DenseLayer {
    /// Weights drawn from a zero-mean Gaussian with variance
    /// `2 / (inputs + outputs)`; biases start at zero.
    pub fn glorot_normal<R: Rng>(inputs: usize, outputs: usize, rng: &mut R) -> Self {
        assert!(inputs >= 1 && outputs >= 1);
        let std = (2.0 / (inputs + outputs) as f64).sqrt();
        let data = (0..inputs * outputs)
            .map(|_| std * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng))
            .collect();
        Self {
            w: Tensor2::from_vec(inputs, outputs, data),
            b: vec![0.0; outputs],
        }
    }

    pub fn inputs(&self) -> usize {
        self.w.rows()
    }

    pub fn outputs(&self) -> usize {
        self.w.cols()
    }

    pub fn forward(&self, x: &Tensor2) -> Tensor2 {
        let mut y = matmul_nn(x, &self.w);
        for r in 0..y.rows() {
            for (v, b) in y.row_mut(r).iter_mut().zip(&self.b) {
                *v += b;
            }
        }
        y
    }

    /// Returns `(dx, dw, db)` for upstream gradient `dy`.
    pub fn backward(&self, x: &Tensor2, dy: &Tensor2) -> (Tensor2, Tensor2, Vec<f64>) {
        let dw = matmul_tn(x, dy);
        let mut db = vec![0.0; self.outputs()];
        for r in 0..dy.rows() {
            for (acc, v) in db.iter_mut().zip(dy.row(r)) {
                *acc += v;
            }
        }
        let dx = matmul_nn(dy, &self.w.transpose());
        (dx, dw, db)
    }
}

/// Per-feature batch normalization with learned scale and shift.
#[derive(Debug, Clone)]
pub struct BatchNormLayer {
    pub gamma: Vec<f64>,
    pub beta: Vec<f64>,
    pub running_mean: Vec<f64>,
    pub running_var: Vec<f64>,
}

/// Batch statistics captured by a training-mode forward pass.
#[derive(Debug, Clone)]
pub struct BnCache {
    pub mean: Vec<f64>,
    pub var: Vec<f64>,
    pub inv_std: Vec<f64>,
}

impl BatchNormLayer {
    pub fn new(width: usize) -> Self {
        assert!(width >= 1);
        Self {
            gamma: vec![1.0; width],
            beta: vec![0.0; width],
            running_mean: vec![0.0; width],
            running_var: vec![1.0; width],
        }
    }

    pub fn width(&self) -> usize {
        self.gamma.len()
    }

    /// Normalize with the batch's own statistics (biased variance); does not
    /// touch the running estimates.
    pub fn forward_train(&self, x: &Tensor2) -> (Tensor2, BnCache) {
        let (rows, cols) = (x.rows(), x.cols());
        debug_assert_eq!(cols, self.width());
        let inv_b = 1.0 / rows as f64;
        let mut mean = vec![0.0; cols];
        for r in 0..rows {
            for (m, v) in mean.iter_mut().zip(x.row(r)) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m *= inv_b;
        }
        let mut var = vec![0.0; cols];
        for r in 0..rows {
            for ((vv, v), m) in var.iter_mut().zip(x.row(r)).zip(&mean) {
                let d = v - m;
                *vv += d * d;
            }
        }
        for v in &mut var {
            *v *= inv_b;
        }
        let inv_std: Vec<f64> = var.iter().map(|v| 1.0 / (v + BN_EPS).sqrt()).collect();
        let y = self.normalize(x, &mean, &inv_std);
        (y, BnCache { mean, var, inv_std })
    }

    /// Normalize with the running statistics (inference mode).
    pub fn forward_infer(&self, x: &Tensor2) -> Tensor2 {
        let inv_std: Vec<f64> = self
            .running_var
            .iter()
            .map(|v| 1.0 / (v + BN_EPS).sqrt())
            .collect();
        self.normalize(x, &self.running_mean, &inv_std)
    }

    fn normalize(&self, x: &Tensor2, mean: &[f64], inv_std: &[f64]) -> Tensor2 {
        let mut y = Tensor2::zeros(x.rows(), x.cols());
        for r in 0..x.rows() {
            let xr = x.row(r);
            let yr = y.row_mut(r);
            for c in 0..xr.len() {
                yr[c] = (xr[c] - mean[c]) * inv_std[c] * self.gamma[c] + self.beta[c];
            }
        }
        y
    }

    /// Fold a batch's statistics into the running estimates:
    /// `running = momentum · running + (1 − momentum) · batch`.
    pub fn absorb(&mut self, cache: &BnCache) {
        for (r, b) in self.running_mean.iter_mut().zip(&cache.mean) {
            *r = BN_MOMENTUM * *r + (1.0 - BN_MOMENTUM) * b;
        }
        for (r, b) in self.running_var.iter_mut().zip(&cache.var) {
            *r = BN_MOMENTUM * *r + (1.0 - BN_MOMENTUM) * b;
        }
    }

    /// Returns `(dx, dgamma, dbeta)`, differentiating through the batch
    /// statistics.
    pub fn backward(&self, x: &Tensor2, cache: &BnCache, dy: &Tensor2) -> (Tensor2, Vec<f64>, Vec<f64>) {
        let (rows, cols) = (x.rows(), x.cols());
        let inv_b = 1.0 / rows as f64;
        let mut dgamma = vec![0.0; cols];
        let mut dbeta = vec![0.0; cols];
        // column sums of dy and dy·x̂
        for r in 0..rows {
            let xr = x.row(r);
            let dyr = dy.row(r);
            for c in 0..cols {
                let xhat = (xr[c] - cache.mean[c]) * cache.inv_std[c];
                dgamma[c] += dyr[c] * xhat;
                dbeta[c] += dyr[c];
            }
        }
        // dx = γ·inv_std · (dy − mean(dy) − x̂ · mean(dy·x̂)), means over the batch
        let mut dx = Tensor2::zeros(rows, cols);
        for r in 0..rows {
            let xr = x.row(r);
            let dyr = dy.row(r);
            let dxr = dx.row_mut(r);
            for c in 0..cols {
                let xhat = (xr[c] - cache.mean[c]) * cache.inv_std[c];
                dxr[c] = self.gamma[c]
                    * cache.inv_std[c]
                    * (dyr[c] - inv_b * dbeta[c] - xhat * inv_b * dgamma[c]);
            }
        }
        (dx, dgamma, dbeta)
    }
}

/// A parameterized layer instance.
#[derive(Debug, Clone)]
pub enum Layer {
    Dense(DenseLayer),
    BatchNorm(BatchNormLayer),
    Activation(Activation),
    ConcatSkip { source: usize },
}

impl Layer {
    pub fn spec(&self) -> LayerSpec {
        match self {
            Layer::Dense(d) => LayerSpec::Dense {
                inputs: d.inputs(),
                outputs: d.outputs(),
            },
            Layer::BatchNorm(bn) => LayerSpec::BatchNorm { width: bn.width() },
            Layer::Activation(a) => LayerSpec::Activation { which: *a },
            Layer::ConcatSkip { source } => LayerSpec::ConcatSkip { source: *source },
        }
    }

    /// Parameter slices updated by the optimizer, in a fixed order.
    pub fn trainable_mut(&mut self) -> Vec<&mut [f64]> {
        match self {
            Layer::Dense(d) => vec![d.w.data_mut(), &mut d.b],
            Layer::BatchNorm(bn) => vec![&mut bn.gamma, &mut bn.beta],
            _ => Vec::new(),
        }
    }

    /// Shapes of the trainable slices, matching [`trainable_mut`](Self::trainable_mut).
    pub fn trainable_lens(&self) -> Vec<usize> {
        match self {
            Layer::Dense(d) => vec![d.w.data().len(), d.b.len()],
            Layer::BatchNorm(bn) => vec![bn.gamma.len(), bn.beta.len()],
            _ => Vec::new(),
        }
    }

    /// All parameter tensors in declaration order (for serialization):
    /// dense `W, b`; batch norm `gamma, beta, running_mean, running_var`.
    pub fn all_tensors(&self) -> Vec<&[f64]> {
        match self {
            Layer::Dense(d) => vec![d.w.data(), &d.b],
            Layer::BatchNorm(bn) => vec![&bn.gamma, &bn.beta, &bn.running_mean, &bn.running_var],
            _ => Vec::new(),
        }
    }

    /// Mutable view of the same tensors as [`all_tensors`](Self::all_tensors).
    pub fn all_tensors_mut(&mut self) -> Vec<&mut [f64]> {
        match self {
            Layer::Dense(d) => vec![d.w.data_mut(), &mut d.b],
            Layer::BatchNorm(bn) => vec![
                &mut bn.gamma,
                &mut bn.beta,
                &mut bn.running_mean,
                &mut bn.running_var,
            ],
            _ => Vec::new(),
        }
    }
}

/// Gradient tensors for one layer, mirroring its trainable slices.
#[derive(Debug, Clone)]
pub enum LayerGrad {
    Dense { dw: Tensor2, db: Vec<f64> },
    BatchNorm { dgamma: Vec<f64>, dbeta: Vec<f64> },
    None,
}

impl LayerGrad {
    /// Slices in the same order as [`Layer::trainable_mut`].
    pub fn slices(&self) -> Vec<&[f64]> {
        match self {
            LayerGrad::Dense { dw, db } => vec![dw.data(), db],
            LayerGrad::BatchNorm { dgamma, dbeta } => vec![dgamma, dbeta],
            LayerGrad::None => Vec::new(),
        }
    }
}
