//! Syndrome-based neural decoding of binary linear block codes.
//!
//! The crate covers the full experimental pipeline for neural syndrome
//! decoders on the BI-AWGN channel:
//!
//! - [`gf2`] — packed GF(2) linear algebra, GF(2^m) fields, and primitive
//!   narrow-sense BCH code construction.
//! - [`channel`] — BPSK transmission over AWGN, hard decisions, reliabilities,
//!   and streamed training-example generation under the zero-codeword
//!   assumption.
//! - [`neural`] — a self-contained feed-forward network engine (dense, batch
//!   normalization, skip concatenation), BCE loss, Adam, learning-rate
//!   schedules, the training loop, and a binary model file format.
//! - [`decoders`] — the syndrome-based neural decoder, the iterative error
//!   decimation (IED) decoder built on top of it, a table-based hard-decision
//!   bounded-distance decoder, and a brute-force maximum-likelihood oracle.
//! - [`harness`] — Monte Carlo BER/BLER estimation with a
//!   stop-at-100-block-errors rule, paired-noise sweeps over the IED
//!   iteration budget, and CSV export.
//! - [`cli`] — the `syndec` command-line front end.
//!
//! Everything is deterministic given a seed: channel noise, weight
//! initialization, and Monte Carlo runs all derive from counter-seeded
//! generators, and results are independent of the worker count.

pub mod channel;
pub mod cli;
pub mod decoders;
pub mod harness;
mod error;
pub mod gf2;
pub mod neural;
mod textio;

pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector, Gf2mField, LinearCode};
