//! Temporary diagnostic probe (not part of the suite).

use syndec::decoders::ErrorEstimator;
use syndec::gf2::{bch_construct, BitVector};
use syndec::neural::load_model;

#[test]
fn reliability_sensitivity_probe() {
    let code = bch_construct(6, 3).unwrap();
    let (model, n, k) = load_model(std::path::Path::new("/tmp/full6345.ndec")).unwrap();
    assert_eq!((n, k), (63, 45));

    // A weight-4 error pattern, beyond the bounded-distance radius.
    let err = [5usize, 17, 33, 50];
    let mut e = BitVector::zeros(63);
    for &j in &err {
        e.set(j, true);
    }
    let s = code.syndrome(&e).unwrap();
    let s_bits: Vec<f64> = s.iter_bits().map(f64::from).collect();

    // Reliabilities strongly hinting at the four error positions.
    let mut r_hint = vec![1.0f64; 63];
    for &j in &err {
        r_hint[j] = 0.05;
    }
    // Uninformative reliabilities.
    let r_flat = vec![0.8f64; 63];

    let out_hint = model.estimate(&s_bits, &r_hint);
    let out_flat = model.estimate(&s_bits, &r_flat);

    let show = |name: &str, out: &[f64]| {
        let mut idx: Vec<usize> = (0..63).collect();
        idx.sort_by(|&a, &b| out[b].partial_cmp(&out[a]).unwrap());
        let top: Vec<String> = idx[..8]
            .iter()
            .map(|&j| format!("{}:{:.3}", j, out[j]))
            .collect();
        let above: Vec<usize> = (0..63).filter(|&j| out[j] > 0.5).collect();
        println!("{name}: top8 = [{}], above 0.5 = {:?}", top.join(", "), above);
        for &j in &err {
            println!("   {name} e-position {j}: {:.4}", out[j]);
        }
    };
    show("hint", &out_hint);
    show("flat", &out_flat);

    let delta: f64 = out_hint
        .iter()
        .zip(&out_flat)
        .map(|(a, b)| (a - b).abs())
        .sum();
    println!("L1 difference between hint and flat outputs: {delta:.4}");

    // Second probe: a realistic single-error block at 4 dB-ish reliabilities,
    // to confirm the net solves the syndrome at all.
    let mut e1 = BitVector::zeros(63);
    e1.set(20, true);
    let s1 = code.syndrome(&e1).unwrap();
    let s1_bits: Vec<f64> = s1.iter_bits().map(f64::from).collect();
    let mut r1 = vec![1.0f64; 63];
    r1[20] = 0.3;
    let out1 = model.estimate(&s1_bits, &r1);
    println!(
        "single error at 20: e~[20] = {:.4}, max other = {:.4}",
        out1[20],
        (0..63)
            .filter(|&j| j != 20)
            .map(|j| out1[j])
            .fold(0.0f64, f64::max)
    );
}

#[test]
fn warm_start_refinement() {
    use syndec::neural::{
        save_model, train, LrSchedule, PlateauSchedule, TrainConfig,
    };

    let code = bch_construct(6, 3).unwrap();
    let src = std::env::var("WARM_SRC").unwrap_or_else(|_| "/tmp/full6345.ndec".into());
    let dst = std::env::var("WARM_DST").unwrap_or_else(|_| "/tmp/refined.ndec".into());
    let lr: f64 = std::env::var("WARM_LR")
        .unwrap_or_else(|_| "1e-4".into())
        .parse()
        .unwrap();
    let (model, _, _) = load_model(std::path::Path::new(&src)).unwrap();
    let mut config = TrainConfig::standard(99);
    config.total_examples = 1_000_000;
    config.validation_examples = 100_000;
    config.batches_per_epoch = 100;
    config.progress = true;
    let mut schedule = LrSchedule::Plateau(PlateauSchedule::new(lr, 0.1, 5));
    let out = train(model, &code, &config, &mut schedule).unwrap();
    assert!(out.fault.is_none());
    println!("refined ({src} @ lr {lr}) best val loss: {:.6e}", out.best_val_loss);
    save_model(std::path::Path::new(&dst), &out.model, 63, 45).unwrap();
}

#[test]
fn criterion8_margin_replica() {
    use syndec::decoders::{BddTable, IedDecoder, SbndDecoder};
    use syndec::harness::{evaluate_many, EvalConfig};

    let code = bch_construct(6, 3).unwrap();
    let path = std::env::var("PROBE_MODEL").unwrap_or_else(|_| "/tmp/full3e7.ndec".into());
    println!("model: {path}");
    let (model, _, _) = load_model(std::path::Path::new(&path)).unwrap();
    let iterative = IedDecoder::new(SbndDecoder::new(code.clone(), &model).unwrap(), 5).unwrap();
    let table = BddTable::build(&code).unwrap();
    let mut eval = EvalConfig::new(vec![5.0]);
    eval.min_block_errors = 500;
    eval.max_blocks = 500_000;
    eval.batch_blocks = 5_000;
    eval.master_seed = 88;
    let records = evaluate_many(&[&iterative, &table], &code, &eval).unwrap();
    let (ied, bdd) = (&records[0][0], &records[1][0]);
    println!(
        "ied: bler {:.4e} in [{:.4e},{:.4e}] ({} errors / {} blocks, capped={})",
        ied.bler, ied.ci_low, ied.ci_high, ied.block_errors, ied.blocks, ied.capped
    );
    println!(
        "bdd: bler {:.4e} in [{:.4e},{:.4e}] ({} errors / {} blocks, capped={})",
        bdd.bler, bdd.ci_low, bdd.ci_high, bdd.block_errors, bdd.blocks, bdd.capped
    );
    println!(
        "separated: {} (gap {:.3e})",
        ied.ci_high < bdd.ci_low,
        bdd.ci_low - ied.ci_high
    );
}

#[test]
fn failure_breakdown_by_weight() {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use syndec::channel::{sigma_from_ebn0, transmit, SigmaMode};
    use syndec::decoders::{BddTable, IedDecoder, SbndDecoder};

    let code = bch_construct(6, 3).unwrap();
    let path = std::env::var("PROBE_MODEL").unwrap_or_else(|_| "/tmp/full6345.ndec".into());
    println!("model: {path}");
    let (model, _, _) = load_model(std::path::Path::new(&path)).unwrap();
    let sigma = sigma_from_ebn0(5.0, 45.0 / 63.0, SigmaMode::RateNormalized).unwrap();
    let bdd = BddTable::build(&code).unwrap();
    let sbnd = SbndDecoder::new(code.clone(), &model).unwrap();
    let ied = IedDecoder::new(SbndDecoder::new(code.clone(), &model).unwrap(), 5).unwrap();

    let zero = BitVector::zeros(63);
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    // counts[w] = (blocks, bdd errs, sbnd errs, ied errs)
    let mut counts = std::collections::BTreeMap::<usize, [u64; 4]>::new();
    for _ in 0..40_000u64 {
        let block = transmit(&code, &zero, sigma, &mut rng).unwrap();
        let w = block.e.weight() as usize;
        let entry = counts.entry(w).or_default();
        entry[0] += 1;
        let (bdd_c, _) = {
            use syndec::decoders::Decoder;
            bdd.decode_block(&block.y)
        };
        if !bdd_c.is_zero() {
            entry[1] += 1;
        }
        if !sbnd.decode(&block.y).c_hat.is_zero() {
            entry[2] += 1;
        }
        if !ied.decode(&block.y).c_hat.is_zero() {
            entry[3] += 1;
        }
    }
    println!("weight | blocks |  bdd errs | sbnd errs | ied5 errs");
    let mut tot = [0u64; 4];
    for (w, c) in &counts {
        println!(
            "{w:6} | {:6} | {:9} | {:9} | {:9}",
            c[0], c[1], c[2], c[3]
        );
        for i in 0..4 {
            tot[i] += c[i];
        }
    }
    println!(
        "total  | {:6} | {:9} | {:9} | {:9}",
        tot[0], tot[1], tot[2], tot[3]
    );
}
