//! Monte Carlo evaluation of block decoders: BER/BLER estimation with a
//! block-error stopping rule, iteration-budget sweeps under paired noise,
//! and CSV export.
//!
//! Every block derives its own RNG stream from the master seed, the grid
//! index, and the block index, so results are independent of the worker
//! count and channel realizations pair exactly across decoders evaluated
//! with the same configuration.

use std::fs;
use std::ops::Range;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{sigma_from_ebn0, transmit, SigmaMode};
use crate::decoders::{Decoder, IedDecoder, SbndDecoder};
use crate::error::{Error, Result};
use crate::gf2::{BitVector, LinearCode};
use crate::neural::Mlp;
use crate::textio::real6;

/// Two-sided 95% normal quantile used by the Wilson score interval.
pub const Z_95: f64 = 1.959_963_984_540_053_6;

/// Configuration for one Monte Carlo run over a grid of Eb/N0 points.
#[derive(Debug, Clone)]
pub struct EvalConfig {
    /// Eb/N0 grid in dB, evaluated in order.
    pub ebn0_db_list: Vec<f64>,
    /// A point stops once every decoder has this many block errors.
    pub min_block_errors: u64,
    /// Hard cap on simulated blocks per point.
    pub max_blocks: u64,
    /// Blocks simulated between stopping-rule checks.
    pub batch_blocks: u64,
    /// Seed from which every per-block RNG stream is derived.
    pub master_seed: u64,
    /// Transmit the all-zero codeword (default) or random codewords.
    pub zero_codeword: bool,
    /// Share channel realizations across the decoders of one sweep; when
    /// false each iteration budget gets an independent noise stream and its
    /// own stopping decision.
    pub paired_noise: bool,
    /// Interpretation of Eb/N0 when mapping to the noise level σ.
    pub sigma_mode: SigmaMode,
    /// Worker threads simulating blocks (results do not depend on this).
    pub workers: usize,
    /// Emit one progress line per wave on standard error.
    pub progress: bool,
}

impl EvalConfig {
    /// Defaults: stop at 100 block errors, cap at 10⁷ blocks, waves of
    /// 10 000, zero codeword, paired noise, rate-normalized σ, one worker.
    pub fn new(ebn0_db_list: Vec<f64>) -> Self {
        Self {
            ebn0_db_list,
            min_block_errors: 100,
            max_blocks: 10_000_000,
            batch_blocks: 10_000,
            master_seed: 0,
            zero_codeword: true,
            paired_noise: true,
            sigma_mode: SigmaMode::RateNormalized,
            workers: 1,
            progress: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.ebn0_db_list.is_empty() {
            return Err(Error::Config("Eb/N0 grid is empty".into()));
        }
        if self.min_block_errors < 1 {
            return Err(Error::Config("min_block_errors must be at least 1".into()));
        }
        if self.batch_blocks < 1 {
            return Err(Error::Config("batch_blocks must be at least 1".into()));
        }
        if self.max_blocks < self.batch_blocks {
            return Err(Error::Config(format!(
                "max_blocks ({}) must be at least batch_blocks ({})",
                self.max_blocks, self.batch_blocks
            )));
        }
        if self.max_blocks >= 1 << 40 {
            return Err(Error::Config(
                "max_blocks must fit the 40-bit per-block stream index".into(),
            ));
        }
        if self.workers < 1 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        Ok(())
    }
}

/// Estimated error rates for one decoder at one Eb/N0 point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    pub ebn0_db: f64,
    /// Blocks simulated.
    pub blocks: u64,
    /// Bits simulated (`blocks · n`).
    pub bits: u64,
    pub block_errors: u64,
    pub bit_errors: u64,
    /// Block error rate `block_errors / blocks`.
    pub bler: f64,
    /// Bit error rate `bit_errors / bits`.
    pub ber: f64,
    /// Mean network invocations per block (zero for classical decoders).
    pub avg_iterations: f64,
    /// 95% Wilson score interval on the block error rate.
    pub ci_low: f64,
    pub ci_high: f64,
    /// True when the block cap was reached before `min_block_errors`, i.e.
    /// the estimate carries less confidence than requested.
    pub capped: bool,
}

/// 95% Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (Z_95 / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // At the extremes the exact interval boundary is 0 or 1; the closed
    // formula only reaches it up to rounding, so pin it.
    let low = if successes == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let high = if successes == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (low, high)
}

/// Integer tallies merged across workers; all fields are exact counts, so
/// the merge order cannot affect the result.
#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    blocks: u64,
    block_errors: u64,
    bit_errors: u64,
    model_calls: u64,
}

impl Tally {
    fn merge(&mut self, other: &Tally) {
        self.blocks += other.blocks;
        self.block_errors += other.block_errors;
        self.bit_errors += other.bit_errors;
        self.model_calls += other.model_calls;
    }
}

/// Fixed per-point simulation parameters shared by all workers.
#[derive(Clone, Copy)]
struct PointSetup {
    master_seed: u64,
    /// Extra stream salt; zero for ordinary evaluation, the 1-based budget
    /// index for unpaired sweeps.
    salt: u64,
    ebn0_idx: usize,
    sigma: f64,
    zero_codeword: bool,
}

/// RNG stream for one block: salt in the top byte, grid index in the next
/// two, block index in the low 40 bits.
fn block_stream(salt: u64, ebn0_idx: usize, block: u64) -> u64 {
    debug_assert!(salt < 0x100);
    debug_assert!(ebn0_idx < 0x1_0000);
    debug_assert!(block < 1 << 40);
    (salt << 56) | ((ebn0_idx as u64) << 40) | block
}

/// Simulate a contiguous block range against every decoder, reusing each
/// channel realization across them.
fn simulate_range(
    decoders: &[&dyn Decoder],
    code: &LinearCode,
    setup: PointSetup,
    range: Range<u64>,
) -> Vec<Tally> {
    let zero = BitVector::zeros(code.n());
    let mut tallies = vec![Tally::default(); decoders.len()];
    for b in range {
        let mut rng = ChaCha8Rng::seed_from_u64(setup.master_seed);
        rng.set_stream(block_stream(setup.salt, setup.ebn0_idx, b));
        let c = if setup.zero_codeword {
            zero.clone()
        } else {
            let mut u = BitVector::zeros(code.k());
            for i in 0..code.k() {
                u.set(i, rng.gen());
            }
            code.encode(&u).expect("message length fixed")
        };
        let block = transmit(code, &c, setup.sigma, &mut rng).expect("dimensions fixed");
        for (decoder, tally) in decoders.iter().zip(&mut tallies) {
            let (c_hat, calls) = decoder.decode_block(&block.y);
            let distance = u64::from(c_hat.hamming_distance(&block.c));
            tally.blocks += 1;
            tally.bit_errors += distance;
            tally.block_errors += u64::from(distance > 0);
            tally.model_calls += calls as u64;
        }
    }
    tallies
}

/// One wave of blocks split across worker threads.
fn run_wave(
    decoders: &[&dyn Decoder],
    code: &LinearCode,
    setup: PointSetup,
    start: u64,
    count: u64,
    workers: usize,
) -> Vec<Tally> {
    if workers <= 1 {
        return simulate_range(decoders, code, setup, start..start + count);
    }
    let chunk = count.div_ceil(workers as u64);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers as u64)
            .map_while(|w| {
                let lo = start + w * chunk;
                if lo >= start + count {
                    return None;
                }
                let hi = (lo + chunk).min(start + count);
                Some(scope.spawn(move || simulate_range(decoders, code, setup, lo..hi)))
            })
            .collect();
        let mut total = vec![Tally::default(); decoders.len()];
        for handle in handles {
            let part = handle.join().expect("simulation worker panicked");
            for (acc, t) in total.iter_mut().zip(&part) {
                acc.merge(t);
            }
        }
        total
    })
}

/// Run one Eb/N0 point until every decoder has `min_block_errors` or the
/// block cap is reached; all decoders see every block.
fn run_point(
    decoders: &[&dyn Decoder],
    code: &LinearCode,
    setup: PointSetup,
    ebn0_db: f64,
    config: &EvalConfig,
) -> Vec<MetricsRecord> {
    let mut totals = vec![Tally::default(); decoders.len()];
    let mut next_block = 0u64;
    loop {
        let done = totals
            .iter()
            .all(|t| t.block_errors >= config.min_block_errors);
        if done || next_block >= config.max_blocks {
            break;
        }
        let wave = config.batch_blocks.min(config.max_blocks - next_block);
        let part = run_wave(decoders, code, setup, next_block, wave, config.workers);
        for (acc, t) in totals.iter_mut().zip(&part) {
            acc.merge(t);
        }
        next_block += wave;
        if config.progress {
            let errors: Vec<u64> = totals.iter().map(|t| t.block_errors).collect();
            eprintln!(
                "ebn0 {ebn0_db} dB: {next_block} blocks, block errors {errors:?}"
            );
        }
    }
    totals
        .iter()
        .map(|tally| {
            let capped = tally.block_errors < config.min_block_errors;
            let bits = tally.blocks * code.n() as u64;
            let (ci_low, ci_high) = wilson_interval(tally.block_errors, tally.blocks);
            MetricsRecord {
                ebn0_db,
                blocks: tally.blocks,
                bits,
                block_errors: tally.block_errors,
                bit_errors: tally.bit_errors,
                bler: tally.block_errors as f64 / tally.blocks as f64,
                ber: tally.bit_errors as f64 / bits as f64,
                avg_iterations: tally.model_calls as f64 / tally.blocks as f64,
                ci_low,
                ci_high,
                capped,
            }
        })
        .collect()
}

/// Estimate BER/BLER for one decoder over the configured Eb/N0 grid.
///
/// Each point simulates waves of `batch_blocks` until `min_block_errors`
/// block errors have accumulated or `max_blocks` is reached (the record is
/// then marked `capped`).
pub fn evaluate(
    decoder: &dyn Decoder,
    code: &LinearCode,
    config: &EvalConfig,
) -> Result<Vec<MetricsRecord>> {
    let per_decoder = evaluate_many(&[decoder], code, config)?;
    Ok(per_decoder.into_iter().next().expect("one decoder in, one out"))
}

/// Estimate BER/BLER for several decoders over the same channel
/// realizations: every decoder sees every block, and a point runs until all
/// decoders have `min_block_errors` (or the cap). Outer index of the result
/// matches `decoders`, inner index the Eb/N0 grid.
pub fn evaluate_many(
    decoders: &[&dyn Decoder],
    code: &LinearCode,
    config: &EvalConfig,
) -> Result<Vec<Vec<MetricsRecord>>> {
    config.validate()?;
    if decoders.is_empty() {
        return Err(Error::Config("no decoders to evaluate".into()));
    }
    for decoder in decoders {
        if decoder.block_len() != code.n() {
            return Err(Error::Config(format!(
                "decoder expects blocks of {} bits but the code has n = {}",
                decoder.block_len(),
                code.n()
            )));
        }
    }
    let mut per_decoder: Vec<Vec<MetricsRecord>> = vec![Vec::new(); decoders.len()];
    for (ebn0_idx, &ebn0_db) in config.ebn0_db_list.iter().enumerate() {
        let setup = PointSetup {
            master_seed: config.master_seed,
            salt: 0,
            ebn0_idx,
            sigma: sigma_from_ebn0(ebn0_db, code.rate(), config.sigma_mode)?,
            zero_codeword: config.zero_codeword,
        };
        let records = run_point(decoders, code, setup, ebn0_db, config);
        for (list, record) in per_decoder.iter_mut().zip(records) {
            list.push(record);
        }
    }
    Ok(per_decoder)
}

/// Evaluate the iterative decoder at several iteration budgets.
///
/// With `paired_noise` (the default) all budgets share every channel
/// realization, so the records are directly comparable block-by-block;
/// otherwise each budget runs independently with its own noise stream and
/// stopping decision. Outer index of the result matches `t_list`.
pub fn sweep_t(
    model: &Mlp,
    code: &LinearCode,
    t_list: &[usize],
    config: &EvalConfig,
) -> Result<Vec<Vec<MetricsRecord>>> {
    if t_list.is_empty() {
        return Err(Error::Config("no iteration budgets to sweep".into()));
    }
    let mut decoders = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let sbnd = SbndDecoder::new(code.clone(), model)?;
        decoders.push(IedDecoder::new(sbnd, t)?);
    }
    if config.paired_noise {
        let refs: Vec<&dyn Decoder> = decoders
            .iter()
            .map(|d| d as &dyn Decoder)
            .collect();
        return evaluate_many(&refs, code, config);
    }
    // Unpaired: an independent stream per budget via a distinct salt.
    config.validate()?;
    let mut results = Vec::with_capacity(t_list.len());
    for (t_idx, decoder) in decoders.iter().enumerate() {
        let mut records = Vec::with_capacity(config.ebn0_db_list.len());
        for (ebn0_idx, &ebn0_db) in config.ebn0_db_list.iter().enumerate() {
            let setup = PointSetup {
                master_seed: config.master_seed,
                salt: t_idx as u64 + 1,
                ebn0_idx,
                sigma: sigma_from_ebn0(ebn0_db, code.rate(), config.sigma_mode)?,
                zero_codeword: config.zero_codeword,
            };
            let mut point =
                run_point(&[decoder as &dyn Decoder], code, setup, ebn0_db, config);
            records.push(point.pop().expect("one decoder in, one out"));
        }
        results.push(records);
    }
    Ok(results)
}

/// Write records as CSV: a fixed header plus one row per record, reals with
/// six significant digits. The `capped` flag is not exported.
pub fn export_csv(records: &[MetricsRecord], path: &Path) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Config("no records to export".into()));
    }
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            real6(r.ebn0_db),
            r.blocks,
            r.bits,
            r.block_errors,
            r.bit_errors,
            real6(r.bler),
            real6(r.ber),
            real6(r.avg_iterations),
            real6(r.ci_low),
            real6(r.ci_high),
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Column layout produced by [`export_csv`].
pub const CSV_HEADER: &str =
    "ebn0_db,blocks,bits,block_errors,bit_errors,bler,ber,avg_iterations,ci_low,ci_high";
