//! Binary cross-entropy over batched predictions.

use crate::error::{Error, Result};
use crate::neural::tensor::Tensor2;

/// Floor/ceiling applied to predictions before the logarithms.
pub const BCE_CLIP: f64 = 1e-12;

/// Mean of `−t·ln(p) − (1−t)·ln(1−p)` over every entry, with `p` clipped to
/// `[1e-12, 1 − 1e-12]`.
pub fn bce_loss(pred: &Tensor2, target: &Tensor2) -> Result<f64> {
    if pred.rows() != target.rows() || pred.cols() != target.cols() {
        return Err(Error::Dimension {
            what: "loss shapes",
            expected: target.rows() * target.cols(),
            got: pred.rows() * pred.cols(),
        });
    }
    let mut acc = 0.0;
    for (&p, &t) in pred.data().iter().zip(target.data()) {
        let p = p.clamp(BCE_CLIP, 1.0 - BCE_CLIP);
        acc -= t * p.ln() + (1.0 - t) * (1.0 - p).ln();
    }
    Ok(acc / pred.data().len() as f64)
}
