//! The `syndec` command-line front end.
//!
//! Four subcommands cover the full experimental pipeline:
//!
//! - `code-info` — construct a BCH code and print its parameters.
//! - `train` — train a syndrome-based error estimator and save it to a
//!   model file together with its per-epoch history.
//! - `eval` — Monte Carlo BER/BLER estimation for one decoder over an
//!   Eb/N0 grid, exported as CSV.
//! - `sweep` — evaluate iterative error decimation at several iteration
//!   budgets against shared channel noise, one CSV per budget.
//!
//! Every experiment flag can also be supplied through `--config FILE`, a
//! plain-text file of `key = value` lines (`#` starts a comment) whose keys
//! are the snake_case flag names (`min_block_errors`, `t_max`, ...).
//! Command-line flags override file entries; file entries override built-in
//! defaults. Unknown keys are rejected so a typo cannot silently fall back
//! to a default.
//!
//! Exit status: 0 on success, 1 for runtime failures (I/O, corrupt model
//! files, capacity limits), 2 for command-line or configuration errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::channel::SigmaMode;
use crate::decoders::{BddTable, Decoder, IedDecoder, MlDecoder, SbndDecoder};
use crate::error::Error;
use crate::gf2::{bch_construct, min_distance_bruteforce, LinearCode};
use crate::harness::{evaluate, export_csv, sweep_t, EvalConfig, MetricsRecord};
use crate::neural::{
    build_architecture, load_model, save_model, train, write_history, Activation, ArchVariant,
    LrSchedule, Mlp, PlateauSchedule, TrainConfig, TriangularSchedule,
};
use crate::textio::real6;

/// Exhaustive-search distance check in `code-info` is limited to this many
/// message bits (2^20 codewords).
const DISTANCE_CHECK_MAX_K: usize = 20;

#[derive(Debug, Parser)]
#[command(
    name = "syndec",
    version,
    about = "Syndrome-based neural decoding of binary linear block codes",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Construct a BCH code and print its parameters.
    CodeInfo(CodeInfoArgs),
    /// Train an error estimator and write the model and history files.
    Train(TrainArgs),
    /// Estimate BER/BLER for one decoder over an Eb/N0 grid.
    Eval(EvalArgs),
    /// Compare iteration budgets of the iterative decoder under shared noise.
    Sweep(SweepArgs),
}

/// Flags shared by every subcommand: the code under test and the optional
/// configuration file.
#[derive(Debug, Args)]
struct CommonArgs {
    /// Plain-text `key = value` configuration file.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Named code: `bch6345` (the (63,45) code) or `bch6336` (the (63,36) code).
    #[arg(long, value_name = "NAME")]
    code: Option<String>,

    /// Field extension degree for a custom BCH code over GF(2^m); needs --t.
    #[arg(long, value_name = "M")]
    m: Option<u32>,

    /// Designed error-correction capability for a custom BCH code; needs --m.
    #[arg(long, value_name = "T")]
    t: Option<u32>,
}

#[derive(Debug, Args)]
struct CodeInfoArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Network: `bch6345`, `bch6336`, `bch6336-no-bn`, `bch6336-relu-no-bn`,
    /// or `custom` (inferred from the code when omitted).
    #[arg(long, value_name = "NAME")]
    arch: Option<String>,

    /// Hidden-layer widths for `--arch custom`, e.g. `128,128,64`.
    #[arg(long, value_name = "LIST")]
    hidden: Option<String>,

    /// Hidden activation for `--arch custom`: `relu` (default) or `sigmoid`.
    #[arg(long, value_name = "NAME")]
    activation: Option<String>,

    /// Batch normalization after each hidden dense layer (`--arch custom`).
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    batch_norm: Option<bool>,

    /// Total training examples drawn from the channel [default: 10000000].
    #[arg(long, value_name = "N")]
    examples: Option<u64>,

    /// Examples per minibatch [default: 2048].
    #[arg(long, value_name = "N")]
    batch_size: Option<usize>,

    /// Training-channel Eb/N0 in dB [default: 4].
    #[arg(long, value_name = "DB")]
    train_ebn0: Option<f64>,

    /// Eb/N0 to sigma mapping: `rate-normalized` (default) or `literal`.
    #[arg(long, value_name = "MODE")]
    sigma_mode: Option<String>,

    /// Validation examples frozen per seed [default: 100000].
    #[arg(long, value_name = "N")]
    val_examples: Option<usize>,

    /// Minibatches per epoch [default: 488].
    #[arg(long, value_name = "N")]
    batches_per_epoch: Option<usize>,

    /// Learning-rate schedule: `plateau` or `triangular` (inferred from the
    /// architecture when omitted).
    #[arg(long, value_name = "NAME")]
    schedule: Option<String>,

    /// Seed for weight initialization and channel noise [default: 1].
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,

    /// Output model file [default: model.ndec].
    #[arg(long, value_name = "FILE")]
    model_out: Option<PathBuf>,

    /// Output per-epoch history CSV [default: history.csv].
    #[arg(long, value_name = "FILE")]
    history_out: Option<PathBuf>,

    /// Suppress the per-epoch progress lines on standard error.
    #[arg(long)]
    quiet: bool,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Decoder: `sbnd` (default), `ied`, `bdd`, or `ml`.
    #[arg(long, value_name = "NAME")]
    decoder: Option<String>,

    /// Trained model file (required for `sbnd` and `ied`).
    #[arg(long, value_name = "FILE")]
    model: Option<PathBuf>,

    /// Eb/N0 grid in dB: `start:end:step` or a comma list [default: 1:8:1].
    #[arg(long, value_name = "GRID")]
    ebn0: Option<String>,

    /// Iteration budget for `ied` [default: 5]. Config-file key: `t_max`.
    #[arg(long = "T", value_name = "N")]
    t_max: Option<usize>,

    #[command(flatten)]
    run: RunArgs,

    /// Output CSV [default: metrics.csv].
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Trained model file for the iterative decoder.
    #[arg(long, value_name = "FILE")]
    model: Option<PathBuf>,

    /// Eb/N0 grid in dB: `start:end:step` or a comma list [default: 1:8:1].
    #[arg(long, value_name = "GRID")]
    ebn0: Option<String>,

    /// Iteration budgets to compare, e.g. `1,2,3,4,5` (the default).
    /// Config-file key: `t_list`.
    #[arg(long = "T", value_name = "LIST")]
    t_list: Option<String>,

    /// Give every budget its own noise stream and stopping decision instead
    /// of sharing channel realizations across budgets.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    unpaired: Option<bool>,

    #[command(flatten)]
    run: RunArgs,

    /// Output CSV name; each budget T writes `<stem>_T<T>.<ext>`
    /// [default: sweep.csv].
    #[arg(long, value_name = "FILE")]
    out: Option<String>,
}

/// Monte Carlo controls shared by `eval` and `sweep`.
#[derive(Debug, Args)]
struct RunArgs {
    /// Block errors to collect per point before stopping [default: 100].
    #[arg(long, value_name = "N")]
    min_block_errors: Option<u64>,

    /// Hard cap on simulated blocks per point [default: 10000000].
    #[arg(long, value_name = "N")]
    max_blocks: Option<u64>,

    /// Blocks between stopping-rule checks [default: 10000].
    #[arg(long, value_name = "N")]
    batch_blocks: Option<u64>,

    /// Master seed for the per-block noise streams [default: 0].
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,

    /// Eb/N0 to sigma mapping: `rate-normalized` (default) or `literal`.
    #[arg(long, value_name = "MODE")]
    sigma_mode: Option<String>,

    /// Transmit uniformly random codewords instead of the all-zero codeword.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    random_codewords: Option<bool>,

    /// Simulation worker threads; the results do not depend on this
    /// [default: all cores].
    #[arg(long, value_name = "N")]
    workers: Option<usize>,

    /// Suppress the per-wave progress lines on standard error.
    #[arg(long)]
    quiet: bool,
}

/// Errors carried to the process exit path.
#[derive(Debug)]
enum CliError {
    /// The command line or configuration file does not describe a valid run
    /// (exit status 2).
    Usage(String),
    /// A valid run failed while executing (exit status 1).
    Runtime(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Runtime(e)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parse the process arguments, run the selected subcommand, and map the
/// outcome to an exit status.
pub fn run() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version arrive here too; they print to stdout
            // and exit 0, while genuine parse errors go to stderr with 2.
            let status = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(status);
        }
    };
    let result = match cli.command {
        Command::CodeInfo(args) => run_code_info(args),
        Command::Train(args) => run_train(args),
        Command::Eval(args) => run_eval(args),
        Command::Sweep(args) => run_sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

// ---------------------------------------------------------------------------
// Configuration files

/// A parsed `key = value` configuration file. Every key a subcommand
/// understands is looked up exactly once; leftovers are reported as errors.
struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    fn empty() -> Self {
        Self { entries: BTreeMap::new() }
    }

    fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::empty());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config file {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|msg| usage(format!("{}: {msg}", path.display())))
    }

    fn parse(text: &str) -> Result<Self, String> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!("line {}: expected `key = value`, got `{raw}`", idx + 1));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() || value.is_empty() {
                return Err(format!("line {}: empty key or value in `{raw}`", idx + 1));
            }
            if entries.insert(key.clone(), value).is_some() {
                return Err(format!("line {}: duplicate key `{key}`", idx + 1));
            }
        }
        Ok(Self { entries })
    }

    /// Remove and parse `key`. Absent keys yield `Ok(None)`; present keys
    /// that fail to parse are usage errors.
    fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, CliError> {
        match self.entries.remove(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                usage(format!("config key `{key}`: cannot parse value `{raw}`"))
            }),
        }
    }

    /// Error out if any key was never requested by the subcommand.
    fn finish(self) -> Result<(), CliError> {
        match self.entries.into_keys().next() {
            None => Ok(()),
            Some(key) => Err(usage(format!("config file: unknown key `{key}`"))),
        }
    }
}

// ---------------------------------------------------------------------------
// Shared argument resolution

fn resolve_code(common: &CommonArgs, file: &mut ConfigFile) -> Result<LinearCode, CliError> {
    let name = common.code.clone().or(file.take::<String>("code")?);
    let m = common.m.or(file.take::<u32>("m")?);
    let t = common.t.or(file.take::<u32>("t")?);
    match (name, m, t) {
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
            Err(usage("give either a named --code or --m/--t, not both"))
        }
        (Some(name), None, None) => match name.as_str() {
            "bch6345" => Ok(bch_construct(6, 3).expect("the (63,45) code always constructs")),
            "bch6336" => Ok(bch_construct(6, 5).expect("the (63,36) code always constructs")),
            other => Err(usage(format!(
                "unknown code `{other}` (expected bch6345 or bch6336)"
            ))),
        },
        (None, Some(m), Some(t)) => bch_construct(m, t).map_err(|e| usage(e.to_string())),
        (None, None, None) => Err(usage(
            "no code selected: pass --code bch6345|bch6336 or both --m and --t",
        )),
        _ => Err(usage("both --m and --t are required to construct a code")),
    }
}

fn parse_sigma_mode(name: &str) -> Result<SigmaMode, CliError> {
    match name {
        "rate-normalized" => Ok(SigmaMode::RateNormalized),
        "literal" => Ok(SigmaMode::Literal),
        other => Err(usage(format!(
            "unknown sigma mode `{other}` (expected rate-normalized or literal)"
        ))),
    }
}

fn parse_activation(name: &str) -> Result<Activation, CliError> {
    match name {
        "relu" => Ok(Activation::Relu),
        "sigmoid" => Ok(Activation::Sigmoid),
        other => Err(usage(format!(
            "unknown activation `{other}` (expected relu or sigmoid)"
        ))),
    }
}

/// Eb/N0 grid: either `start:end:step` (inclusive of both endpoints, with a
/// tolerance so fractional steps land on the end) or a comma list in dB.
fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let text = text.trim();
    let parse_one = |s: &str| -> Result<f64, CliError> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| usage(format!("cannot parse `{s}` as an Eb/N0 value in dB")))?;
        if !v.is_finite() {
            return Err(usage(format!("Eb/N0 value `{s}` is not finite")));
        }
        Ok(v)
    };
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(usage(format!(
                "grid `{text}` must be start:end:step or a comma list"
            )));
        }
        let start = parse_one(parts[0])?;
        let end = parse_one(parts[1])?;
        let step = parse_one(parts[2])?;
        if step <= 0.0 {
            return Err(usage(format!("grid step must be positive, got {step}")));
        }
        if end < start {
            return Err(usage(format!("grid end {end} is below start {start}")));
        }
        let count = ((end - start) / step + 1.0 + 1e-9).floor() as usize;
        if count > 10_000 {
            return Err(usage(format!("grid `{text}` has {count} points (limit 10000)")));
        }
        Ok((0..count).map(|i| start + i as f64 * step).collect())
    } else {
        let values: Vec<f64> = text
            .split(',')
            .map(parse_one)
            .collect::<Result<_, _>>()?;
        Ok(values)
    }
}

fn parse_usize_list(text: &str, what: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("cannot parse `{s}` in {what} as a positive integer")))
        })
        .collect()
}

/// Resolve the shared Monte Carlo controls into an [`EvalConfig`].
fn resolve_run(
    run: &RunArgs,
    ebn0: &Option<String>,
    file: &mut ConfigFile,
) -> Result<EvalConfig, CliError> {
    let grid_text = ebn0
        .clone()
        .or(file.take::<String>("ebn0")?)
        .unwrap_or_else(|| "1:8:1".to_string());
    let mut config = EvalConfig::new(parse_grid(&grid_text)?);
    if let Some(v) = run.min_block_errors.or(file.take("min_block_errors")?) {
        config.min_block_errors = v;
    }
    if let Some(v) = run.max_blocks.or(file.take("max_blocks")?) {
        config.max_blocks = v;
    }
    if let Some(v) = run.batch_blocks.or(file.take("batch_blocks")?) {
        config.batch_blocks = v;
    }
    if let Some(v) = run.seed.or(file.take("seed")?) {
        config.master_seed = v;
    }
    if let Some(name) = run.sigma_mode.clone().or(file.take::<String>("sigma_mode")?) {
        config.sigma_mode = parse_sigma_mode(&name)?;
    }
    if let Some(v) = run.random_codewords.or(file.take("random_codewords")?) {
        config.zero_codeword = !v;
    }
    config.workers = match run.workers.or(file.take("workers")?) {
        Some(v) => v,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    config.progress = !run.quiet;
    Ok(config)
}

/// Load a model file and require that it was trained for `code`.
fn load_model_for(path: &Path, code: &LinearCode) -> Result<Mlp, CliError> {
    let (model, n, k) = load_model(path)?;
    if (n, k) != (code.n(), code.k()) {
        return Err(CliError::Runtime(Error::Config(format!(
            "model {} was trained for an ({n},{k}) code, but the selected code is ({},{})",
            path.display(),
            code.n(),
            code.k()
        ))));
    }
    Ok(model)
}

// ---------------------------------------------------------------------------
// code-info

fn run_code_info(args: CodeInfoArgs) -> Result<(), CliError> {
    let mut file = ConfigFile::load(args.common.config.as_deref())?;
    let code = resolve_code(&args.common, &mut file)?;
    file.finish()?;

    println!(
        "BCH code: n={}, k={}, rate {:.5}",
        code.n(),
        code.k(),
        code.rate()
    );
    println!(
        "design distance {} (corrects up to {} bit errors)",
        code.d_min(),
        code.t()
    );
    if code.k() <= DISTANCE_CHECK_MAX_K {
        let true_d = min_distance_bruteforce(&code)?;
        println!(
            "minimum distance (exhaustive over 2^{} codewords): {true_d}",
            code.k()
        );
    }
    if let Some(g) = code.generator_poly() {
        println!("generator polynomial: {g}");
        let deg = g.degree().unwrap_or(0);
        let coeffs: String = (0..=deg)
            .rev()
            .map(|i| if g.coeff(i) { '1' } else { '0' })
            .collect();
        println!("generator coefficients (highest degree first): {coeffs}");
    }
    println!(
        "parity-check matrix: {} rows x {} columns",
        code.parity_check().rows(),
        code.parity_check().cols()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// train

fn resolve_arch(args: &TrainArgs, file: &mut ConfigFile, code: &LinearCode) -> Result<ArchVariant, CliError> {
    let arch = args.arch.clone().or(file.take::<String>("arch")?);
    let hidden = args.hidden.clone().or(file.take::<String>("hidden")?);
    let activation = args.activation.clone().or(file.take::<String>("activation")?);
    let batch_norm = args.batch_norm.or(file.take("batch_norm")?);

    let arch = match arch {
        Some(name) => name,
        None if hidden.is_some() => "custom".to_string(),
        None => match (code.n(), code.k()) {
            (63, 45) => "bch6345".to_string(),
            (63, 36) => "bch6336".to_string(),
            (n, k) => {
                return Err(usage(format!(
                    "no reference architecture for an ({n},{k}) code; pass --arch custom with --hidden"
                )))
            }
        },
    };
    if arch != "custom" && (hidden.is_some() || activation.is_some() || batch_norm.is_some()) {
        return Err(usage(
            "--hidden/--activation/--batch-norm are only meaningful with --arch custom",
        ));
    }
    match arch.as_str() {
        "bch6345" => Ok(ArchVariant::Bch6345),
        "bch6336" => Ok(ArchVariant::Bch6336),
        "bch6336-no-bn" => Ok(ArchVariant::Bch6336NoBn),
        "bch6336-relu-no-bn" => Ok(ArchVariant::Bch6336ReluNoBn),
        "custom" => {
            let Some(hidden) = hidden else {
                return Err(usage("--arch custom requires --hidden, e.g. --hidden 128,128"));
            };
            let hidden = parse_usize_list(&hidden, "--hidden")?;
            let activation = match activation {
                Some(name) => parse_activation(&name)?,
                None => Activation::Relu,
            };
            Ok(ArchVariant::Custom {
                hidden,
                activation,
                batch_norm: batch_norm.unwrap_or(false),
            })
        }
        other => Err(usage(format!(
            "unknown architecture `{other}` (expected bch6345, bch6336, bch6336-no-bn, bch6336-relu-no-bn, or custom)"
        ))),
    }
}

fn run_train(args: TrainArgs) -> Result<(), CliError> {
    let mut file = ConfigFile::load(args.common.config.as_deref())?;
    let code = resolve_code(&args.common, &mut file)?;
    let variant = resolve_arch(&args, &mut file, &code)?;

    let seed = args.seed.or(file.take("seed")?).unwrap_or(1);
    let mut config = TrainConfig::standard(seed);
    if let Some(v) = args.examples.or(file.take("examples")?) {
        config.total_examples = v;
    }
    if let Some(v) = args.batch_size.or(file.take("batch_size")?) {
        config.batch_size = v;
    }
    if let Some(v) = args.train_ebn0.or(file.take("train_ebn0")?) {
        config.train_ebn0_db = v;
    }
    if let Some(name) = args.sigma_mode.clone().or(file.take::<String>("sigma_mode")?) {
        config.sigma_mode = parse_sigma_mode(&name)?;
    }
    if let Some(v) = args.val_examples.or(file.take("val_examples")?) {
        config.validation_examples = v;
    }
    if let Some(v) = args.batches_per_epoch.or(file.take("batches_per_epoch")?) {
        config.batches_per_epoch = v;
    }
    config.progress = !args.quiet;

    let schedule_name = match args.schedule.clone().or(file.take::<String>("schedule")?) {
        Some(name) => name,
        // The deeper sigmoid networks train with the cyclic schedule; the
        // ReLU stack and custom networks use reduce-on-plateau.
        None => match variant {
            ArchVariant::Bch6336 | ArchVariant::Bch6336NoBn | ArchVariant::Bch6336ReluNoBn => {
                "triangular".to_string()
            }
            ArchVariant::Bch6345 | ArchVariant::Custom { .. } => "plateau".to_string(),
        },
    };
    let mut schedule = match schedule_name.as_str() {
        "plateau" => LrSchedule::Plateau(PlateauSchedule::standard()),
        "triangular" => LrSchedule::Triangular(TriangularSchedule::standard()),
        other => {
            return Err(usage(format!(
                "unknown schedule `{other}` (expected plateau or triangular)"
            )))
        }
    };

    let model_out = args
        .model_out
        .clone()
        .or(file.take::<String>("model_out")?.map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("model.ndec"));
    let history_out = args
        .history_out
        .clone()
        .or(file.take::<String>("history_out")?.map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("history.csv"));
    file.finish()?;

    let model = build_architecture(&code, &variant, seed)?;
    eprintln!(
        "training {} parameters on the ({},{}) code, {} examples, seed {seed}",
        model.parameter_count(),
        code.n(),
        code.k(),
        config.total_examples
    );
    let outcome = train(model, &code, &config, &mut schedule)?;

    save_model(&model_out, &outcome.model, code.n(), code.k())?;
    write_history(&history_out, &outcome.history)?;
    println!("best validation loss: {}", real6(outcome.best_val_loss));
    println!("wrote {} and {}", model_out.display(), history_out.display());
    if let Some(fault) = outcome.fault {
        eprintln!("training stopped early ({fault}); the saved model is the last good checkpoint");
        return Err(CliError::Runtime(fault));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// eval

fn run_eval(args: EvalArgs) -> Result<(), CliError> {
    let mut file = ConfigFile::load(args.common.config.as_deref())?;
    let code = resolve_code(&args.common, &mut file)?;
    let decoder_name = args
        .decoder
        .clone()
        .or(file.take::<String>("decoder")?)
        .unwrap_or_else(|| "sbnd".to_string());
    let model_path = args.model.clone().or(file.take::<String>("model")?.map(PathBuf::from));
    let t_max = args.t_max.or(file.take("t_max")?);
    let config = resolve_run(&args.run, &args.ebn0, &mut file)?;
    let out = args
        .out
        .clone()
        .or(file.take::<String>("out")?.map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("metrics.csv"));
    file.finish()?;

    if t_max.is_some() && decoder_name != "ied" {
        return Err(usage("--T only applies to the ied decoder"));
    }
    let needs_model = matches!(decoder_name.as_str(), "sbnd" | "ied");
    if !needs_model && model_path.is_some() {
        return Err(usage(format!(
            "--model is not used by the {decoder_name} decoder"
        )));
    }

    let decoder: Box<dyn Decoder> = match decoder_name.as_str() {
        "sbnd" | "ied" => {
            let Some(path) = model_path else {
                return Err(usage(format!("the {decoder_name} decoder requires --model FILE")));
            };
            let model = load_model_for(&path, &code)?;
            let sbnd = SbndDecoder::new(code.clone(), model)?;
            if decoder_name == "sbnd" {
                Box::new(sbnd)
            } else {
                Box::new(IedDecoder::new(sbnd, t_max.unwrap_or(5))?)
            }
        }
        "bdd" => Box::new(BddTable::build(&code)?),
        "ml" => Box::new(MlDecoder::new(&code)?),
        other => {
            return Err(usage(format!(
                "unknown decoder `{other}` (expected sbnd, ied, bdd, or ml)"
            )))
        }
    };

    let label = match (decoder_name.as_str(), t_max) {
        ("ied", t) => format!("ied (T={})", t.unwrap_or(5)),
        (name, _) => name.to_string(),
    };
    eprintln!(
        "evaluating {label} on the ({},{}) code over {} Eb/N0 points, seed {}",
        code.n(),
        code.k(),
        config.ebn0_db_list.len(),
        config.master_seed
    );
    let records = evaluate(decoder.as_ref(), &code, &config)?;
    print_records(&label, &records);
    export_csv(&records, &out)?;
    println!("wrote {}", out.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// sweep

fn run_sweep(args: SweepArgs) -> Result<(), CliError> {
    let mut file = ConfigFile::load(args.common.config.as_deref())?;
    let code = resolve_code(&args.common, &mut file)?;
    let model_path = args.model.clone().or(file.take::<String>("model")?.map(PathBuf::from));
    let t_list_text = args
        .t_list
        .clone()
        .or(file.take::<String>("t_list")?)
        .unwrap_or_else(|| "1,2,3,4,5".to_string());
    let unpaired = args.unpaired.or(file.take("unpaired")?).unwrap_or(false);
    let mut config = resolve_run(&args.run, &args.ebn0, &mut file)?;
    let out = args
        .out
        .clone()
        .or(file.take::<String>("out")?)
        .unwrap_or_else(|| "sweep.csv".to_string());
    file.finish()?;

    let t_list = parse_usize_list(&t_list_text, "--T")?;
    if t_list.is_empty() {
        return Err(usage("--T must list at least one iteration budget"));
    }
    let Some(model_path) = model_path else {
        return Err(usage("sweep requires --model FILE"));
    };
    let model = load_model_for(&model_path, &code)?;
    config.paired_noise = !unpaired;

    eprintln!(
        "sweeping iteration budgets {t_list:?} on the ({},{}) code ({} noise), seed {}",
        code.n(),
        code.k(),
        if config.paired_noise { "paired" } else { "independent" },
        config.master_seed
    );
    let per_budget = sweep_t(&model, &code, &t_list, &config)?;
    for (t, records) in t_list.iter().zip(&per_budget) {
        print_records(&format!("ied (T={t})"), records);
        let path = sweep_out_path(&out, *t);
        export_csv(records, &path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

/// `sweep.csv` with budget 3 becomes `sweep_T3.csv`; an extension-less name
/// gets the suffix appended.
fn sweep_out_path(out: &str, t: usize) -> PathBuf {
    let path = Path::new(out);
    match (
        path.file_stem().and_then(|s| s.to_str()),
        path.extension().and_then(|s| s.to_str()),
    ) {
        (Some(stem), Some(ext)) => path.with_file_name(format!("{stem}_T{t}.{ext}")),
        _ => PathBuf::from(format!("{out}_T{t}")),
    }
}

// ---------------------------------------------------------------------------
// Output

fn print_records(label: &str, records: &[MetricsRecord]) {
    println!("{label}");
    println!(
        "  {:>9}  {:>11}  {:>11}  {:>10}  {:>7}  {:>11}",
        "Eb/N0 dB", "BLER", "BER", "blocks", "errors", "model calls"
    );
    let mut any_capped = false;
    for r in records {
        let capped = if r.capped {
            any_capped = true;
            " *"
        } else {
            ""
        };
        println!(
            "  {:>9.2}  {:>11}  {:>11}  {:>10}  {:>7}  {:>11.3}{capped}",
            r.ebn0_db,
            real6(r.bler),
            real6(r.ber),
            r.blocks,
            r.block_errors,
            r.avg_iterations
        );
    }
    if any_capped {
        println!("  * stopped at the block cap before reaching the target error count");
    }
}
