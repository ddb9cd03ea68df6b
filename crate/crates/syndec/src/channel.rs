//! BPSK over the binary-input AWGN channel.
//!
//! A codeword bit `c ∈ {0,1}` is transmitted as `1 − 2c` and received as
//! `y = 1 − 2c + z` with `z ~ N(0, σ²)`. The receiver splits `y` into hard
//! decisions `y_b = 1[y < 0]` and reliabilities `r = |y|`; the decoders never
//! see `y` directly. Training batches use the all-zero codeword, under which
//! the error pattern equals the hard-decision vector.

use crate::error::{Error, Result};
use crate::gf2::{BitVector, LinearCode};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// How E_b/N_0 is converted to a noise standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaMode {
    /// σ = (2·10^{E_b/N_0 \[dB\] / 10})^{−1/2}; the code rate is ignored.
    Literal,
    /// σ = (2·R·10^{E_b/N_0 \[dB\] / 10})^{−1/2}; accounts for the energy of
    /// the redundant bits. This is the convention used by the classical
    /// baseline curves and the default everywhere in this crate.
    RateNormalized,
}

/// Convert an E_b/N_0 operating point to the AWGN noise standard deviation.
pub fn sigma_from_ebn0(ebn0_db: f64, rate: f64, mode: SigmaMode) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::Range(format!("code rate {rate} outside (0, 1]")));
    }
    let snr = 10f64.powf(ebn0_db / 10.0);
    let sigma = match mode {
        SigmaMode::Literal => (2.0 * snr).powf(-0.5),
        SigmaMode::RateNormalized => (2.0 * rate * snr).powf(-0.5),
    };
    Ok(sigma)
}

/// An E_b/N_0 operating point with its derived noise level.
#[derive(Debug, Clone, Copy)]
pub struct NoiseModel {
    pub ebn0_db: f64,
    pub rate: f64,
    pub mode: SigmaMode,
    pub sigma: f64,
}

impl NoiseModel {
    pub fn new(ebn0_db: f64, rate: f64, mode: SigmaMode) -> Result<Self> {
        let sigma = sigma_from_ebn0(ebn0_db, rate, mode)?;
        Ok(Self {
            ebn0_db,
            rate,
            mode,
            sigma,
        })
    }
}

/// One transmitted block with every intermediate quantity retained.
#[derive(Debug, Clone)]
pub struct TransmittedBlock {
    /// Codeword bits.
    pub c: BitVector,
    /// Noise realization.
    pub z: Vec<f64>,
    /// Channel output `y = 1 − 2c + z`.
    pub y: Vec<f64>,
    /// Hard decisions `1[y < 0]`.
    pub y_b: BitVector,
    /// Error pattern `y_b ⊕ c`.
    pub e: BitVector,
    /// Syndrome `y_b·Hᵀ` (equals `e·Hᵀ`).
    pub s: BitVector,
    /// Reliabilities `|y|`.
    pub r: Vec<f64>,
}

/// Hard decisions and reliabilities from the raw channel output.
/// `y = 0` maps to bit 0 (the comparison is strict).
pub fn receiver_front_end(y: &[f64]) -> (BitVector, Vec<f64>) {
    let mut y_b = BitVector::zeros(y.len());
    let mut r = Vec::with_capacity(y.len());
    for (i, &v) in y.iter().enumerate() {
        if v < 0.0 {
            y_b.set(i, true);
        }
        r.push(v.abs());
    }
    (y_b, r)
}

/// Deterministic channel application for a given noise vector. This is the
/// seam tests use to force specific noise (including all-zeros).
pub fn apply_channel(code: &LinearCode, c: &BitVector, z: &[f64]) -> Result<TransmittedBlock> {
    let n = code.n();
    if c.len() != n {
        return Err(Error::Dimension {
            what: "codeword length",
            expected: n,
            got: c.len(),
        });
    }
    if z.len() != n {
        return Err(Error::Dimension {
            what: "noise length",
            expected: n,
            got: z.len(),
        });
    }
    let y: Vec<f64> = (0..n)
        .map(|i| 1.0 - 2.0 * (c.get(i) as u8 as f64) + z[i])
        .collect();
    let (y_b, r) = receiver_front_end(&y);
    let e = y_b.xor(c);
    let s = code.syndrome(&y_b)?;
    Ok(TransmittedBlock {
        c: c.clone(),
        z: z.to_vec(),
        y,
        y_b,
        e,
        s,
        r,
    })
}

/// Transmit one codeword over the AWGN channel.
pub fn transmit<R: Rng>(
    code: &LinearCode,
    c: &BitVector,
    sigma: f64,
    rng: &mut R,
) -> Result<TransmittedBlock> {
    assert!(sigma > 0.0, "noise standard deviation must be positive");
    let z: Vec<f64> = (0..code.n())
        .map(|_| sigma * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng))
        .collect();
    apply_channel(code, c, &z)
}

/// A batch of training examples under the all-zero codeword.
///
/// `inputs` is row-major `batch × input_dim` with each row the concatenation
/// `[s (n−k bits as 0/1 reals) ‖ r (n reals)]`; `targets` is row-major
/// `batch × n` holding the error pattern as 0/1 reals.
#[derive(Debug, Clone)]
pub struct TrainingBatch {
    pub batch: usize,
    pub input_dim: usize,
    pub output_dim: usize,
    pub inputs: Vec<f64>,
    pub targets: Vec<f64>,
}

/// Input feature width for a code: syndrome bits plus reliabilities.
pub fn input_dim(code: &LinearCode) -> usize {
    (code.n() - code.k()) + code.n()
}

/// Draw `batch` fresh zero-codeword examples at noise level `sigma`.
pub fn make_training_batch<R: Rng>(
    code: &LinearCode,
    sigma: f64,
    batch: usize,
    rng: &mut R,
) -> TrainingBatch {
    assert!(batch >= 1, "batch size must be at least 1");
    assert!(sigma > 0.0, "noise standard deviation must be positive");
    let n = code.n();
    let red = n - code.k();
    let in_dim = red + n;
    let mut inputs = Vec::with_capacity(batch * in_dim);
    let mut targets = Vec::with_capacity(batch * n);
    let zero = BitVector::zeros(n);
    for _ in 0..batch {
        let block = transmit(code, &zero, sigma, rng).expect("dimensions fixed by construction");
        // With c = 0 the target error pattern is exactly y_b.
        debug_assert_eq!(block.e, block.y_b);
        for i in 0..red {
            inputs.push(block.s.get(i) as u8 as f64);
        }
        inputs.extend_from_slice(&block.r);
        for i in 0..n {
            targets.push(block.e.get(i) as u8 as f64);
        }
    }
    TrainingBatch {
        batch,
        input_dim: in_dim,
        output_dim: n,
        inputs,
        targets,
    }
}
