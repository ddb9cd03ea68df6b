//! End-to-end tests of the `syndec` binary: argument handling, exit codes,
//! the train/eval/sweep round trip on a small code, and reproducibility of
//! the written artifacts.

use std::path::Path;
use std::process::{Command, Output};

fn syndec(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syndec"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("the binary should run")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("the binary should not die from a signal")
}

/// Train a small custom network on the (15,5) code into `dir`, returning the
/// process output. Fast: 8 minibatches of 256 examples, 16 hidden units.
fn train_small(dir: &Path, seed: &str, quiet: bool) -> Output {
    let mut args = vec![
        "train",
        "--m",
        "4",
        "--t",
        "3",
        "--hidden",
        "16",
        "--examples",
        "2048",
        "--batch-size",
        "256",
        "--val-examples",
        "256",
        "--batches-per-epoch",
        "4",
        "--seed",
        seed,
    ];
    if quiet {
        args.push("--quiet");
    }
    syndec(dir, &args)
}

#[test]
fn no_arguments_shows_usage_and_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = syndec(dir.path(), &[]);
    assert_eq!(exit_code(&out), 2);
    let combined = format!("{}{}", stdout(&out), stderr(&out));
    assert!(combined.contains("Usage"), "expected usage text, got: {combined}");
}

#[test]
fn help_lists_the_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let out = syndec(dir.path(), &["--help"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    for sub in ["code-info", "train", "eval", "sweep"] {
        assert!(text.contains(sub), "--help should mention {sub}");
    }
}

#[test]
fn code_info_describes_the_named_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = syndec(dir.path(), &["code-info", "--code", "bch6345"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("n=63, k=45"));
    assert!(text.contains("corrects up to 3 bit errors"));
    assert!(text.contains("generator polynomial"));
    assert!(text.contains("18 rows x 63 columns"));
}

#[test]
fn code_info_verifies_the_small_code_distance_exhaustively() {
    let dir = tempfile::tempdir().unwrap();
    let out = syndec(dir.path(), &["code-info", "--m", "4", "--t", "3"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("n=15, k=5"));
    assert!(text.contains("design distance 7"));
    assert!(text.contains("minimum distance (exhaustive over 2^5 codewords): 7"));
}

#[test]
fn degenerate_code_parameters_are_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = syndec(dir.path(), &["code-info", "--m", "1", "--t", "1"]);
    assert_eq!(exit_code(&out), 2);
    let out = syndec(dir.path(), &["code-info", "--m", "4"]);
    assert_eq!(exit_code(&out), 2);
    let out = syndec(dir.path(), &["code-info", "--code", "bch6345", "--m", "4"]);
    assert_eq!(exit_code(&out), 2);
    let out = syndec(dir.path(), &["code-info", "--code", "hamming74"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn config_file_merges_under_command_line_flags() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("exp.cfg"), "# experiment\nm = 4\nt = 3\n").unwrap();

    let out = syndec(dir.path(), &["code-info", "--config", "exp.cfg"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("n=15, k=5"));

    // A flag overrides the file: t = 2 gives the (15,7) code.
    let out = syndec(dir.path(), &["code-info", "--config", "exp.cfg", "--t", "2"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("n=15, k=7"));
}

#[test]
fn config_file_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.cfg"), "m = 4\nt = 3\nbogus = 1\n").unwrap();
    let out = syndec(dir.path(), &["code-info", "--config", "bad.cfg"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("bogus"));

    let out = syndec(dir.path(), &["code-info", "--config", "missing.cfg"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn training_writes_model_and_history_and_reruns_identically() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();

    let out = train_small(dir_a.path(), "5", false);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("best validation loss:"));
    assert!(stderr(&out).contains("epoch 1/2"), "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("epoch 2/2"), "stderr: {}", stderr(&out));

    let out = train_small(dir_b.path(), "5", true);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert!(!stderr(&out).contains("epoch"), "--quiet should silence progress");

    for name in ["model.ndec", "history.csv"] {
        let a = std::fs::read(dir_a.path().join(name)).unwrap();
        let b = std::fs::read(dir_b.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} should be byte-identical across reruns");
        assert!(!a.is_empty());
    }

    // A different seed must change the learned parameters.
    let dir_c = tempfile::tempdir().unwrap();
    let out = train_small(dir_c.path(), "6", true);
    assert_eq!(exit_code(&out), 0);
    let a = std::fs::read(dir_a.path().join("model.ndec")).unwrap();
    let c = std::fs::read(dir_c.path().join("model.ndec")).unwrap();
    assert_ne!(a, c);
}

#[test]
fn eval_classical_decoder_writes_the_metrics_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = syndec(
        dir.path(),
        &[
            "eval", "--m", "4", "--t", "3", "--decoder", "bdd", "--ebn0", "2,4",
            "--min-block-errors", "20", "--max-blocks", "3000", "--batch-blocks", "500",
            "--seed", "11", "--out", "bdd.csv", "--quiet",
        ],
    );
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = std::fs::read_to_string(dir.path().join("bdd.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "ebn0_db,blocks,bits,block_errors,bit_errors,bler,ber,avg_iterations,ci_low,ci_high"
    );
    assert_eq!(lines.len(), 3, "one header and one row per Eb/N0 point");
    // A table decoder never invokes a network.
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[7], "0.00000e0");
    }
}

#[test]
fn eval_single_shot_and_unit_budget_iterative_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = train_small(dir.path(), "5", true);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));

    let run = |decoder: &str, extra: &[&str], out_name: &str| {
        let mut args = vec![
            "eval", "--m", "4", "--t", "3", "--decoder", decoder, "--model", "model.ndec",
            "--ebn0", "2", "--min-block-errors", "20", "--max-blocks", "3000",
            "--batch-blocks", "500", "--seed", "11", "--quiet", "--out", out_name,
        ];
        args.extend_from_slice(extra);
        let out = syndec(dir.path(), &args);
        assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    };
    run("sbnd", &[], "sbnd.csv");
    run("ied", &["--T", "1"], "ied1.csv");

    let sbnd = std::fs::read(dir.path().join("sbnd.csv")).unwrap();
    let ied1 = std::fs::read(dir.path().join("ied1.csv")).unwrap();
    assert_eq!(sbnd, ied1, "an iteration budget of 1 is exactly the single-shot decoder");
}

#[test]
fn sweep_writes_one_csv_per_budget() {
    let dir = tempfile::tempdir().unwrap();
    let out = train_small(dir.path(), "5", true);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));

    let out = syndec(
        dir.path(),
        &[
            "sweep", "--m", "4", "--t", "3", "--model", "model.ndec", "--ebn0", "2",
            "--T", "1,3", "--min-block-errors", "20", "--max-blocks", "3000",
            "--batch-blocks", "500", "--seed", "11", "--quiet",
        ],
    );
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    for name in ["sweep_T1.csv", "sweep_T3.csv"] {
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert_eq!(text.lines().count(), 2, "{name} should hold a header and one row");
    }
}

#[test]
fn oversized_brute_force_decoder_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = syndec(
        dir.path(),
        &["eval", "--code", "bch6345", "--decoder", "ml", "--ebn0", "4", "--quiet"],
    );
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("capacity"), "stderr: {}", stderr(&out));
}

#[test]
fn model_dependent_flags_are_validated() {
    let dir = tempfile::tempdir().unwrap();
    // A network decoder without a model file.
    let out = syndec(dir.path(), &["eval", "--m", "4", "--t", "3", "--decoder", "sbnd"]);
    assert_eq!(exit_code(&out), 2);
    // An iteration budget for a non-iterative decoder.
    let out = syndec(
        dir.path(),
        &["eval", "--m", "4", "--t", "3", "--decoder", "bdd", "--T", "3"],
    );
    assert_eq!(exit_code(&out), 2);
    // A model flag for a decoder that cannot use one.
    let out = syndec(
        dir.path(),
        &["eval", "--m", "4", "--t", "3", "--decoder", "bdd", "--model", "model.ndec"],
    );
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn model_trained_for_another_code_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = train_small(dir.path(), "5", true);
    assert_eq!(exit_code(&out), 0);
    // The model was trained for (15,5); evaluating the (15,7) code must fail.
    let out = syndec(
        dir.path(),
        &[
            "eval", "--m", "4", "--t", "2", "--decoder", "sbnd", "--model", "model.ndec",
            "--ebn0", "2", "--quiet",
        ],
    );
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("(15,5)"), "stderr: {}", stderr(&out));
}
