//! Release acceptance suite: one test per shipping criterion.
//!
//! Each test exercises a frozen, seed-pinned experiment and asserts the
//! stated tolerance, so a green run certifies the whole pipeline end to
//! end. Expected values were produced by independent reference
//! computations (exact integer arithmetic, closed forms evaluated
//! separately, or large Monte Carlo runs) and are frozen here; loosening a
//! tolerance or reseeding to make a failure disappear defeats the suite's
//! purpose. Run with `--nocapture` to see one `C# PASS` line per
//! criterion with the measured margins.
//!
//! The heavyweight sweeps (criteria 3, 4, and 7) are computed once and
//! shared with the determinism test (criterion 10) through `OnceLock`
//! caches, so the suite's wall time stays close to the cost of a single
//! pass.

use std::sync::OnceLock;
use std::time::Instant;

use num_complex::Complex64;
use oac_airchannel::{
    apply_mac, combine, error_decomposition, sample_channel, sum_beamformer, ChannelDist,
    SystemConfig,
};
use oac_bounds::{
    antenna_bound_symbol, convergence_rhs, latency_suite, symbol_error_moment, ConvergenceInput,
    FadingBoundInput, LatencyInput,
};
use oac_codec::{decode_sum, encode, QuantizerSpec};
use oac_fel::{aggregate, AggregateMode};
use oac_harness::config::parse_config;
use oac_harness::runners::{run_latency, run_mse_sweep, run_train, CsvTable};
use oac_powerctl::{select_beta, PowerScaling};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

// ------------------------------------------------------------ shared runs

/// Reduced-noise MSE sweep configurations: (K, gradient range) cross.
fn mse_sweep_config(k: u32, delta_g: u32) -> String {
    format!(
        "aggregator = awgn\nseed = 1301\nK = {k}\nk_list = {k}\nN = 100\nq = 64\n\
         delta_g = {delta_g}\ngrad_low = 0\ngrad_high = {delta_g}\nnr_list = 1\n\
         trials = 100\nsnr_db_list = -15, -12, -9, -6, -3, 0, 3, 6, 9, 12, 15, 18, 21, 24\n"
    )
}

/// The four sweep tables plus their compute time in seconds.
fn mse_sweep_results() -> &'static (Vec<CsvTable>, f64) {
    static CACHE: OnceLock<(Vec<CsvTable>, f64)> = OnceLock::new();
    CACHE.get_or_init(|| {
        let start = Instant::now();
        let tables = [(50u32, 32u32), (50, 64), (400, 32), (400, 64)]
            .iter()
            .map(|&(k, dg)| run_mse_sweep(&parse_config(&mse_sweep_config(k, dg)).unwrap()).unwrap())
            .collect();
        (tables, start.elapsed().as_secs_f64())
    })
}

/// Blind-fading antenna sweep: unit sources, unit fading and noise, the
/// antenna grid bracketing the provisioning bound for epsilon = 40 at
/// confidence 0.99.
fn fading_sweep_config() -> String {
    "aggregator = fading\nseed = 1304\nK = 200\nk_list = 200\nN = 1\nq = 4\n\
     delta_g = 1\ngrad_low = 0\ngrad_high = 1\nsigma_z2 = 1\nsigma_h2 = 1\n\
     trials = 1000\nnr_list = 10, 25, 50, 100, 200, 400, 585, 800\n\
     epsilon = 40\ndelta = 0.01\n"
        .to_string()
}

fn fading_sweep_result() -> &'static (CsvTable, f64) {
    static CACHE: OnceLock<(CsvTable, f64)> = OnceLock::new();
    CACHE.get_or_init(|| {
        let start = Instant::now();
        let table = run_mse_sweep(&parse_config(&fading_sweep_config()).unwrap()).unwrap();
        (table, start.elapsed().as_secs_f64())
    })
}

/// Federated training configuration on the synthetic three-class task.
///
/// The power budget derives from the modulation's own worst-case frame
/// energy at a shared transmit scale (`sqrt(beta)/d = 24`), so different
/// constellations spend the same realized power on typical frames while
/// each budget still covers its own worst case. `delta_g` widens from 4
/// to 6 for the antenna-contrast pair, which moves the heavy-noise
/// operating point without touching the main comparison.
fn train_config(aggregator: &str, q: u32, n_r: u32, sigma_z2: f64, delta_g: f64) -> String {
    let scale = 24.0f64;
    let side = (q as f64).sqrt();
    let p_max = 1.1 * 63.0 * (side - 1.0) * (side - 1.0) / 2.0 / (scale * scale);
    format!(
        "aggregator = {aggregator}\nseed = 1307\nK = 20\nq = {q}\nNr = {n_r}\n\
         sigma_z2 = {sigma_z2}\nsigma_h2 = 1\np_max = {p_max}\nbeta_margin = 1.1\n\
         delta_g = {delta_g}\nmodel = softmax\nloss = cross-entropy\nclasses = 3\n\
         input_dim = 20\nsamples_per_class = 850\nseparation = 2.6\n\
         data_mode = label-skew\nshards_per_device = 1\n\
         batch = 1000000\nlocal_epochs = 0\neta = 0.3\nrounds = 100\ntrials = 5\n"
    )
}

/// The six training runs, in a fixed order: error-free reference, the
/// pinned fading point, its two degraded comparisons, and the heavy-noise
/// antenna-contrast pair.
fn train_run_specs() -> [(&'static str, &'static str, u32, u32, f64, f64); 6] {
    [
        ("error-free", "ideal", 256, 100, 1.0, 4.0),
        ("fading q256 nr100 sz1", "fading", 256, 100, 1.0, 4.0),
        ("fading q256 nr10  sz1", "fading", 256, 10, 1.0, 4.0),
        ("fading q64  nr100 sz1", "fading", 64, 100, 1.0, 4.0),
        ("fading q256 nr800 sz10", "fading", 256, 800, 10.0, 6.0),
        ("fading q256 nr10  sz10", "fading", 256, 10, 10.0, 6.0),
    ]
}

fn train_results() -> &'static (Vec<CsvTable>, f64) {
    static CACHE: OnceLock<(Vec<CsvTable>, f64)> = OnceLock::new();
    CACHE.get_or_init(|| {
        let start = Instant::now();
        let tables = train_run_specs()
            .iter()
            .map(|&(_, agg, q, n_r, sz2, dg)| {
                run_train(&parse_config(&train_config(agg, q, n_r, sz2, dg)).unwrap()).unwrap()
            })
            .collect();
        (tables, start.elapsed().as_secs_f64())
    })
}

/// Final-round test accuracy of one cached training run.
fn final_accuracy(table: &CsvTable) -> f64 {
    table.value(table.rows().len() - 1, "test_acc")
}

// -------------------------------------------------------------- criteria

/// Criterion 1: encoding, superposition, and lattice decoding compose to
/// the identity on integer level sums — exhaustively for small
/// constellations and on 10^5 random tuples per (q, K) setting for the
/// large ones. Budget: 10 s.
#[test]
fn c01_codec_identity_on_level_sums() {
    let start = Instant::now();
    let mut checked: u64 = 0;

    let mut verify = |levels: &[u32], q: u32| {
        let k = levels.len() as u32;
        let s: Complex64 = levels.iter().map(|&l| encode(l, q).as_complex()).sum();
        let expected: u64 = levels.iter().map(|&l| l as u64).sum();
        let decoded = decode_sum(s, k, q);
        assert!(
            decoded.value() == expected && decoded.k() == k,
            "C1 FAIL: levels {levels:?} over q={q} decoded to {} (expected {expected})",
            decoded.value()
        );
        assert!(
            decoded.avg() == expected as f64 / k as f64,
            "C1 FAIL: average level mismatch for levels {levels:?} over q={q}"
        );
        checked += 1;
    };

    for (q, k_max) in [(4u32, 4u32), (16, 3)] {
        for k in 1..=k_max {
            let tuples = (q as u64).pow(k);
            for idx in 0..tuples {
                let mut rest = idx;
                let levels: Vec<u32> = (0..k)
                    .map(|_| {
                        let l = (rest % q as u64) as u32;
                        rest /= q as u64;
                        l
                    })
                    .collect();
                verify(&levels, q);
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for q in [64u32, 256] {
        for k in [2u32, 5, 20] {
            for _ in 0..100_000 {
                let levels: Vec<u32> = (0..k).map(|_| rng.random_range(0..q)).collect();
                verify(&levels, q);
            }
        }
    }

    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 10.0, "C1 FAIL: took {secs:.1} s (budget 10 s)");
    println!("C1 PASS: {checked} level tuples decoded exactly in {secs:.2} s");
}

/// Criterion 2: with zero channel noise and no fading the digital
/// pipeline returns exactly the quantize-average-dequantize reference on
/// 10^3 random gradient batches (N = 100, K = 20, q = 64). Zero
/// tolerance: the comparison is `==` on every f64.
#[test]
fn c02_noiseless_digital_equals_quantized_average() {
    let k = 20usize;
    let n = 100usize;
    let quant = QuantizerSpec::new(64, 1.0);
    let cfg = SystemConfig::new(
        k as u32,
        n as u32,
        1,
        64,
        1.0,
        0.0,
        1e9,
        ChannelDist::ComplexGaussian,
    );
    let scaling = PowerScaling::neutral(k);
    let mut rng = ChaCha8Rng::seed_from_u64(102);

    for batch in 0..1000 {
        // Spill past the clip range on purpose; clipping is part of the
        // quantizer and must agree on both paths.
        let grads: Vec<Vec<f64>> = (0..k)
            .map(|_| (0..n).map(|_| rng.random_range(-1.25..1.25)).collect())
            .collect();
        let out = aggregate(&grads, AggregateMode::Awgn, &cfg, &quant, &scaling, &mut rng);
        let reference: Vec<f64> = (0..n)
            .map(|i| {
                let level_sum: u64 = grads.iter().map(|g| quant.quantize(g[i]) as u64).sum();
                quant.dequantize(level_sum as f64 / k as f64)
            })
            .collect();
        assert!(
            out == reference,
            "C2 FAIL: noiseless digital output diverged from the quantized average on batch {batch}"
        );
    }
    println!("C2 PASS: 1000 noiseless batches matched the quantized average bit for bit");
}

/// Criterion 3: across K in {50, 400} and gradient ranges [0, 32] and
/// [0, 64] (N = 100, q = 64, 100 trials per point, -15..24 dB), the
/// empirical gradient MSE stays at or below the closed-form prediction on
/// at least 98% of grid points and decreases strictly with SNR.
/// Budget: 2 min.
#[test]
fn c03_reduced_noise_mse_tracks_the_closed_form() {
    let (tables, secs) = mse_sweep_results();
    let mut points = 0usize;
    let mut violations = 0usize;
    for (table, &(k, dg)) in tables.iter().zip(&[(50u32, 32u32), (50, 64), (400, 32), (400, 64)]) {
        let mut prev = f64::INFINITY;
        for row in 0..table.rows().len() {
            let emp = table.value(row, "mse_empirical");
            let bound = table.value(row, "mse_bound_awgn");
            points += 1;
            if emp > bound {
                violations += 1;
            }
            assert!(
                emp < prev,
                "C3 FAIL: empirical MSE is not strictly decreasing at K={k} range={dg} \
                 snr={} dB ({emp:e} after {prev:e})",
                table.value(row, "snr_db")
            );
            prev = emp;
        }
    }
    let ok = points - violations;
    assert!(
        ok as f64 >= 0.98 * points as f64,
        "C3 FAIL: empirical MSE exceeded the bound at {violations} of {points} grid points"
    );
    assert!(*secs < 120.0, "C3 FAIL: took {secs:.1} s (budget 120 s)");
    println!(
        "C3 PASS: bound respected at {ok}/{points} grid points, all four sweeps strictly \
         decreasing, computed in {secs:.1} s"
    );
}

/// Criterion 4: blind-fading aggregation of 200 unit-range sources
/// concentrates as provisioned — at the antenna count returned for a
/// +-40 absolute-error target at 99% confidence, at most 5% of 1000
/// trials exceed the target — and the empirical MSE sits below the
/// expected-error bound curve across the whole antenna grid.
/// Budget: 2 min.
#[test]
fn c04_fading_concentration_meets_the_antenna_provisioning() {
    let bound_input = FadingBoundInput {
        gamma: 1.0,
        sigma_h: 1.0,
        sigma_z: 1.0,
        k: 200,
        n: 1,
        q: 4,
        n_r: 10,
        epsilon: 40.0,
        delta: 0.01,
    };
    let n_r_star = antenna_bound_symbol(&bound_input);
    assert!(
        n_r_star == 585,
        "C4 FAIL: provisioning bound moved to {n_r_star} antennas (expected 585)"
    );

    let (table, secs) = fading_sweep_result();
    let mut starred_p99 = None;
    for row in 0..table.rows().len() {
        let nr = table.value(row, "nr");
        let emp = table.value(row, "mse_empirical");
        let bound = table.value(row, "mse_bound_fading");
        assert!(
            emp <= bound,
            "C4 FAIL: empirical MSE {emp:e} above the fading bound {bound:e} at N_r = {nr}"
        );
        if (nr - n_r_star as f64).abs() < 0.5 {
            starred_p99 = Some(table.value(row, "abs_err_p99"));
        }
    }
    let p99 = starred_p99.expect("C4 FAIL: the provisioned antenna count is missing from the grid");
    // The 99th percentile of |error| under the target caps the exceedance
    // frequency at 1% <= 5%.
    assert!(
        p99 <= 40.0,
        "C4 FAIL: p99 absolute error {p99:.2} exceeds the +-40 target at N_r = {n_r_star}"
    );
    assert!(*secs < 120.0, "C4 FAIL: took {secs:.1} s (budget 120 s)");
    println!(
        "C4 PASS: all 8 antenna points under the bound; p99 |error| {p99:.2} <= 40 at \
         N_r = {n_r_star}; computed in {secs:.1} s"
    );
}

/// Criterion 5: the signal / interference / noise split of the combining
/// error reproduces the total to 1e-9 relative on 10^4 draws, and each
/// term's empirical mean is zero within three standard errors.
/// Budget: 30 s.
#[test]
fn c05_error_decomposition_is_exact_and_centered() {
    let start = Instant::now();
    let k = 10u32;
    let n_r = 32u32;
    let cfg = SystemConfig::new(k, 1, n_r, 4, 1.0, 2.0, 1e9, ChannelDist::ComplexGaussian);
    let mut rng = ChaCha8Rng::seed_from_u64(1305);
    let symbols: Vec<Complex64> = (0..k)
        .map(|_| Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)))
        .collect();
    let exact_sum: Complex64 = symbols.iter().sum();

    let draws = 10_000usize;
    let mut worst_rel = 0.0f64;
    let mut sums = [[0.0f64; 2]; 3];
    let mut sqs = [[0.0f64; 2]; 3];
    for draw in 0..draws {
        let ch = sample_channel(&cfg, &mut rng);
        let u = sum_beamformer(&ch, &cfg);
        let y = apply_mac(&symbols, &ch);
        let total = combine(&u, &y) - exact_sum;
        let parts = error_decomposition(&ch, &symbols, &cfg);
        let rel = (parts.total() - total).norm() / total.norm().max(1.0);
        worst_rel = worst_rel.max(rel);
        assert!(
            rel <= 1e-9,
            "C5 FAIL: decomposition misses the total error by {rel:e} relative on draw {draw}"
        );
        for (slot, term) in [parts.e_sig, parts.e_int, parts.e_noise].iter().enumerate() {
            for (dim, v) in [term.re, term.im].iter().enumerate() {
                sums[slot][dim] += v;
                sqs[slot][dim] += v * v;
            }
        }
    }

    let n = draws as f64;
    for (slot, name) in ["e_sig", "e_int", "e_noise"].iter().enumerate() {
        for (dim, dname) in ["re", "im"].iter().enumerate() {
            let mean = sums[slot][dim] / n;
            let se = ((sqs[slot][dim] / n - mean * mean).max(0.0) / n).sqrt();
            assert!(
                mean.abs() <= 3.0 * se,
                "C5 FAIL: {name}.{dname} mean {mean:e} is beyond three standard errors ({se:e})"
            );
        }
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 30.0, "C5 FAIL: took {secs:.1} s (budget 30 s)");
    println!(
        "C5 PASS: identity within {worst_rel:.1e} relative over {draws} draws, all six term \
         components centered, in {secs:.2} s"
    );
}

/// Criterion 6: the closed-form squared decision error matches a 10^6-draw
/// simulation of the snapped lattice channel within three standard errors,
/// for q in {4, 16, 64} at three noise levels each. Budget: 1 min.
#[test]
fn c06_decision_error_moment_matches_simulation() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1306);
    let draws = 1_000_000u64;
    let mut worst_dev = 0.0f64;
    for q in [4u32, 16, 64] {
        for (sigma_z, n_r) in [(0.2, 1u32), (0.6, 2), (0.6, 1)] {
            let side = 1u64 << (q.trailing_zeros() / 2);
            let sigma_eff = sigma_z / (2.0 * n_r as f64).sqrt();
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..draws {
                let symbol = rng.random_range(0..side) as f64;
                let noise: f64 = rng.sample(StandardNormal);
                let observed = symbol + sigma_eff * noise;
                let snapped = (observed + 0.5).floor().clamp(0.0, (side - 1) as f64);
                let err = snapped - symbol;
                let sq = err * err;
                sum += sq;
                sum_sq += sq * sq;
            }
            let n = draws as f64;
            let mean = sum / n;
            let se = (((sum_sq / n - mean * mean).max(0.0)) / n).sqrt();
            let formula = symbol_error_moment(q, sigma_z, n_r);
            let dev = (mean - formula).abs() / se.max(1e-12);
            worst_dev = worst_dev.max(dev);
            assert!(
                dev <= 3.0,
                "C6 FAIL: q={q} sigma_z={sigma_z} n_r={n_r}: closed form {formula:e} is \
                 {dev:.1} standard errors from the simulated {mean:e}"
            );
        }
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 60.0, "C6 FAIL: took {secs:.1} s (budget 60 s)");
    println!(
        "C6 PASS: nine operating points within 3 SE of the closed form (worst {worst_dev:.2} SE) \
         in {secs:.1} s"
    );
}

/// Criterion 7: federated softmax training on the synthetic three-class
/// task (dim 20, ~100 train samples per device, K = 20, T = 100, mean of
/// 5 seeded runs) shows the expected channel-quality orderings:
/// (a) the error-free reference reaches 90% accuracy;
/// (b) the pinned fading point (q=256, N_r=100, unit variances) lands
///     within 5 accuracy points of error-free;
/// (c) more antennas and a finer constellation never hurt at matched
///     settings;
/// (d) under heavy noise the 800-vs-10 antenna gap is at least 20 points.
/// Budget: 5 min.
#[test]
fn c07_training_shows_channel_quality_orderings() {
    let (tables, secs) = train_results();
    let acc: Vec<f64> = tables.iter().map(final_accuracy).collect();
    let names = train_run_specs();
    let (ideal, pinned, fewer_antennas, coarser, heavy_800, heavy_10) =
        (acc[0], acc[1], acc[2], acc[3], acc[4], acc[5]);

    assert!(
        ideal >= 0.90,
        "C7 FAIL: (a) error-free accuracy {ideal:.4} is below 0.90"
    );
    let pinned_gap = (pinned - ideal).abs();
    assert!(
        pinned_gap <= 0.05,
        "C7 FAIL: (b) fading at q=256 N_r=100 is {pinned_gap:.4} from error-free (allowed 0.05)"
    );
    assert!(
        pinned >= fewer_antennas,
        "C7 FAIL: (c) accuracy dropped when antennas increased 10 -> 100 \
         ({fewer_antennas:.4} -> {pinned:.4})"
    );
    assert!(
        pinned >= coarser,
        "C7 FAIL: (c) accuracy dropped when the constellation grew 64 -> 256 \
         ({coarser:.4} -> {pinned:.4})"
    );
    let contrast = heavy_800 - heavy_10;
    assert!(
        contrast >= 0.20,
        "C7 FAIL: (d) heavy-noise antenna contrast {contrast:.4} is below 0.20"
    );
    assert!(*secs < 300.0, "C7 FAIL: took {secs:.1} s (budget 300 s)");

    for (spec, a) in names.iter().zip(&acc) {
        println!("C7      {:24} final accuracy {a:.4}", spec.0);
    }
    println!(
        "C7 PASS: (a) {ideal:.4} (b) gap {pinned_gap:.4} (c) +{:.4}/+{:.4} (d) contrast \
         {contrast:.4}, computed in {secs:.1} s",
        pinned - fewer_antennas,
        pinned - coarser
    );
}

/// Criterion 8: on a quadratic objective with known smoothness L = 1 (one
/// bias per class under squared error, so the Hessian is the identity),
/// the measured average squared gradient norm over T = 100 rounds of
/// digital-uplink training stays below the stationarity bound evaluated
/// with the measured channel error, quantization error, and gradient
/// divergence, for eta in {0.1/L, 0.5/L}. Budget: 30 s.
#[test]
fn c08_convergence_bound_holds_on_a_quadratic() {
    let start = Instant::now();
    let classes = 4usize;
    let k = 20usize;
    let t = 100u32;

    // Per-device class-frequency targets: device d holds equal shares of
    // classes d mod 4 and (d+1) mod 4 (16 samples each, two classes), so
    // each local objective is 0.5 ||w - c_k||^2 plus a constant.
    let targets: Vec<Vec<f64>> = (0..k)
        .map(|d| {
            let mut c = vec![0.0; classes];
            c[d % classes] += 0.5;
            c[(d + 1) % classes] += 0.5;
            c
        })
        .collect();
    let global_target: Vec<f64> = (0..classes)
        .map(|j| targets.iter().map(|c| c[j]).sum::<f64>() / k as f64)
        .collect();
    // Exact mean divergence of the local gradients around the global one:
    // the gradient offsets are the constant vectors c_bar - c_k.
    let theta_bar = targets
        .iter()
        .map(|c| {
            c.iter()
                .zip(&global_target)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
        })
        .sum::<f64>()
        / k as f64;

    let cfg = SystemConfig::new(
        k as u32,
        classes as u32,
        1,
        64,
        1.0,
        1.0,
        400.0,
        ChannelDist::ComplexGaussian,
    );
    let mut noiseless_cfg = cfg;
    noiseless_cfg.sigma_z2 = 0.0;
    let quant = QuantizerSpec::new(64, 4.0);
    let scaling = select_beta(&vec![16u64; k], &cfg, 1.1);

    for (run, eta) in [0.1f64, 0.5].iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(1308 + run as u64);
        let mut silent = ChaCha8Rng::seed_from_u64(9);
        let mut w = vec![0.0f64; classes];
        let loss_gap = 0.5
            * w.iter()
                .zip(&global_target)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>();
        let mut lhs_sum = 0.0;
        let mut sigma_ch2 = 0.0f64;
        let mut sigma_q2 = 0.0f64;
        for _ in 0..t {
            let true_grad: Vec<f64> = w
                .iter()
                .zip(&global_target)
                .map(|(wi, ci)| wi - ci)
                .collect();
            lhs_sum += true_grad.iter().map(|g| g * g).sum::<f64>();

            let grads: Vec<Vec<f64>> = targets
                .iter()
                .map(|c| w.iter().zip(c).map(|(wi, ci)| wi - ci).collect())
                .collect();
            let estimate =
                aggregate(&grads, AggregateMode::Awgn, &cfg, &quant, &scaling, &mut rng);
            let quantized_mean = aggregate(
                &grads,
                AggregateMode::Awgn,
                &noiseless_cfg,
                &quant,
                &scaling,
                &mut silent,
            );
            let q_err: f64 = quantized_mean
                .iter()
                .zip(&true_grad)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            let ch_err: f64 = estimate
                .iter()
                .zip(&quantized_mean)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            sigma_q2 = sigma_q2.max(q_err);
            sigma_ch2 = sigma_ch2.max(ch_err);

            for (wi, gi) in w.iter_mut().zip(&estimate) {
                *wi -= eta * gi;
            }
        }
        let lhs = lhs_sum / t as f64;
        let rhs = convergence_rhs(&ConvergenceInput {
            eta: *eta,
            l_smooth: 1.0,
            t,
            loss_gap,
            sigma_ch2,
            sigma_q2,
            theta_bar,
        });
        assert!(
            lhs <= rhs,
            "C8 FAIL: measured average squared gradient norm {lhs:e} exceeds the bound {rhs:e} \
             at eta = {eta}"
        );
        println!(
            "C8      eta {eta}: measured {lhs:.4e} <= bound {rhs:.4e} (ratio {:.2})",
            rhs / lhs
        );
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 30.0, "C8 FAIL: took {secs:.1} s (budget 30 s)");
    println!("C8 PASS: stationarity bound dominates at both step sizes, in {secs:.2} s");
}

/// Criterion 9: the analytic latency model reproduces its frozen
/// reference values — the digital scheme's log-distortion ratio
/// approaches 1 strictly as the constellation grows, the orthogonal-to-
/// digital latency ratio grows linearly in K (R^2 >= 0.99), and at the
/// broadband reference point the advantage exceeds 10^3. Budget: 5 s.
#[test]
fn c09_latency_model_matches_frozen_references() {
    let start = Instant::now();

    // Frozen by an independent evaluation of the closed forms.
    let gamma_ladder = [
        (4u32, 0.618304636375529),
        (16, 0.761343701089877),
        (64, 0.836645125036417),
        (256, 0.869811904912240),
        (1024, 0.885875833885372),
    ];
    let mut prev_dist = f64::INFINITY;
    let mut top_ratio = 0.0;
    for (q, frozen) in gamma_ladder {
        let mut input = LatencyInput::broadband_base();
        input.q = q;
        let report = latency_suite(&input);
        assert!(
            (report.gamma_ratio - frozen).abs() < 1e-12,
            "C9 FAIL: gamma at q={q} moved to {} (frozen {frozen})",
            report.gamma_ratio
        );
        let dist = (report.gamma_ratio - 1.0).abs();
        assert!(
            dist < prev_dist,
            "C9 FAIL: |gamma - 1| stopped decreasing at q={q}"
        );
        prev_dist = dist;
        top_ratio = report.t_ofdma / report.t_compfed;
    }
    assert!(
        top_ratio >= 1e3,
        "C9 FAIL: broadband latency advantage {top_ratio:.3e} is below 10^3"
    );

    let cfg = parse_config(
        "aggregator = awgn\nk_list = 10, 50, 100, 150, 200, 250, 300, 350, 400, 450, 500\n\
         q = 4\ndelta_g = 0.5\n",
    )
    .unwrap();
    let table = run_latency(&cfg).unwrap();
    let pts: Vec<(f64, f64)> = (0..table.rows().len())
        .map(|row| {
            (
                table.value(row, "k"),
                table.value(row, "t_ofdma") / table.value(row, "t_compfed"),
            )
        })
        .collect();
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    let slope = sxy / sxx;
    let ss_res: f64 = pts
        .iter()
        .map(|p| {
            let fit = mean_y + slope * (p.0 - mean_x);
            (p.1 - fit) * (p.1 - fit)
        })
        .sum();
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - mean_y) * (p.1 - mean_y)).sum();
    let r2 = 1.0 - ss_res / ss_tot;
    assert!(
        r2 >= 0.99,
        "C9 FAIL: latency ratio is not linear in K (R^2 = {r2:.5})"
    );

    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 5.0, "C9 FAIL: took {secs:.2} s (budget 5 s)");
    println!(
        "C9 PASS: gamma ladder frozen and strictly tightening, ratio {top_ratio:.2e} >= 1e3, \
         K-linearity R^2 = {r2:.5}, in {secs:.2} s"
    );
}

/// Criterion 10: the sweep and training pipelines are bitwise
/// reproducible — recomputing the criterion-3, criterion-4, and
/// criterion-7 tables on a single-thread pool and again on a multi-thread
/// pool yields byte-identical CSV, because every random stream is
/// addressed by (seed, experiment, trial, round, subchannel) rather than
/// by execution order.
#[test]
fn c10_csv_output_is_bitwise_reproducible_across_thread_counts() {
    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .expect("C10 FAIL: could not build the single-thread pool");
    let wide = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .expect("C10 FAIL: could not build the multi-thread pool");
    let mut compared = 0usize;

    let mut check = |label: String, reference: &CsvTable, config: &str| {
        let baseline = reference.to_csv();
        for (pool, pool_name) in [(&serial, "1-thread"), (&wide, "3-thread")] {
            let again = pool
                .install(|| {
                    let cfg = parse_config(config).unwrap();
                    if config.contains("model =") {
                        run_train(&cfg)
                    } else {
                        run_mse_sweep(&cfg)
                    }
                })
                .unwrap()
                .to_csv();
            assert!(
                again == baseline,
                "C10 FAIL: {label} differs between the original run and the {pool_name} rerun"
            );
            compared += 1;
        }
    };

    let (sweeps, _) = mse_sweep_results();
    for (table, &(k, dg)) in sweeps.iter().zip(&[(50u32, 32u32), (50, 64), (400, 32), (400, 64)]) {
        check(
            format!("reduced-noise sweep K={k} range={dg}"),
            table,
            &mse_sweep_config(k, dg),
        );
    }

    let (fading, _) = fading_sweep_result();
    check(
        "fading antenna sweep".to_string(),
        fading,
        &fading_sweep_config(),
    );

    let (trains, _) = train_results();
    for (table, spec) in trains.iter().zip(train_run_specs()) {
        check(
            format!("training run {}", spec.0),
            table,
            &train_config(spec.1, spec.2, spec.3, spec.4, spec.5),
        );
    }

    println!("C10 PASS: {compared} rerun comparisons were byte-identical across pool sizes");
}
