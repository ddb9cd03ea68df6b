//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by code construction, the network engine, decoding, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A vector or matrix had the wrong length/shape for the operation.
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// An argument was outside its valid range.
    #[error("out of range: {0}")]
    Range(String),

    /// A requested enumeration or table exceeds the supported size.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Code construction failed (degenerate code, non-primitive polynomial, ...).
    #[error("construction failed: {0}")]
    Construction(String),

    /// Mismatched components (model vs. code, architecture vs. code, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// A NaN or infinity appeared during a forward/backward pass.
    #[error("numeric fault in layer {layer}: {detail}")]
    NumericFault { layer: usize, detail: String },

    /// A model file failed its integrity or format checks.
    #[error("corrupt model file: {0}")]
    CorruptModel(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
