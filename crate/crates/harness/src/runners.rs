//! The four experiment pipelines behind the CLI subcommands.
//!
//! Each runner takes a validated [`ExperimentConfig`] and returns a
//! [`CsvTable`]. All Monte Carlo work is addressed through
//! `derive_stream`, trials may run in parallel, and per-point results
//! are reduced in ascending trial order — so a fixed config and seed
//! produce bitwise-identical CSV regardless of thread count.
//!
//! Column contracts (also shown by `oac <command> --help`):
//!
//! * `mse-sweep`: `nr, snr_db, k, trials, mse_empirical, mse_bound_awgn,
//!   mse_bound_fading, abs_err_p99` — one row per grid point
//!   (`k_list` x `nr_list` x SNR axis).
//! * `train`: `round, train_loss, test_acc, grad_mse, grad_norm2` — one
//!   row per round, each value averaged over `trials` runs.
//! * `bounds`: `k, nr_symbol, nr_symbol_noise, nr_gradient,
//!   mse_bound_fading, convergence_rhs` — one row per `k_list` entry.
//! * `latency`: `k, t_ofdma, t_analog, t_compfed, gamma_ratio` — one row
//!   per `k_list` entry.

use crate::config::{ConfigError, DataMode, DatasetKind, ExperimentConfig};
use crate::streams::{derive_stream, HarnessStreams, EXP_MSE, EXP_TRAIN, TRIAL_SHARED};
use num_complex::Complex64;
use oac_airchannel::{apply_mac, combine, sample_channel, sum_beamformer, SystemConfig};
use oac_bounds::{
    antenna_bound_gradient, antenna_bound_symbol, antenna_bound_symbol_noise_scaled,
    convergence_rhs, expected_abs_error_fading, latency_suite, mse_awgn_bound, mse_fading_bound,
    AwgnBoundInput, ConvergenceInput, FadingBoundInput, LatencyInput,
};
use oac_codec::QuantizerSpec;
use oac_fel::{
    aggregate, dataset_from_idx, make_synthetic_dataset, partition, train, AggregateMode, Dataset,
    LearnerSpec, PartitionMode, RoundMetrics, TrainSetup,
};
use oac_powerctl::select_beta;
use rand::Rng;
use rayon::prelude::*;
use std::path::Path;

// ------------------------------------------------------------------ errors

/// Everything a runner or the CLI can fail with.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    /// The configuration text failed to parse or validate.
    #[error(transparent)]
    Config(#[from] ConfigError),
    /// A file could not be read or written.
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    /// An IDX dataset file was malformed.
    #[error(transparent)]
    Idx(#[from] oac_fel::IdxError),
    /// The configuration is valid but does not fit the command.
    #[error("{0}")]
    Invalid(String),
}

// ------------------------------------------------------------------- CSV

/// An in-memory CSV result: fixed header, preformatted rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvTable {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width mismatch");
        self.rows.push(row);
    }

    /// Column names, in emission order.
    pub fn header(&self) -> &[&'static str] {
        &self.header
    }

    /// Data rows as formatted strings.
    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    /// Value of the named column in one row, parsed back to `f64`.
    pub fn value(&self, row: usize, column: &str) -> f64 {
        let idx = self
            .header
            .iter()
            .position(|&h| h == column)
            .unwrap_or_else(|| panic!("no column `{column}`"));
        self.rows[row][idx]
            .parse()
            .unwrap_or_else(|_| panic!("column `{column}` row {row} is not numeric"))
    }

    /// Serializes the table (header plus rows, `\n` line endings).
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(&self.header)
            .expect("in-memory CSV write cannot fail");
        for row in &self.rows {
            writer.write_record(row).expect("in-memory CSV write cannot fail");
        }
        String::from_utf8(writer.into_inner().expect("in-memory CSV flush cannot fail"))
            .expect("CSV output is UTF-8")
    }
}

/// Formats a float with 13 significant digits, comfortably above the
/// 9-digit floor the CSV contract promises.
fn fmt(value: f64) -> String {
    format!("{:.12e}", value)
}

fn percentile_99(mut values: Vec<f64>) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values
        .sort_by(|a, b| a.partial_cmp(b).expect("quantile input must not contain NaN"));
    let rank = ((0.99 * values.len() as f64).ceil() as usize).clamp(1, values.len());
    values[rank - 1]
}

// ------------------------------------------------------------- mse sweep

/// Mean symbol energy of the digital constellation (uniform levels).
fn digital_symbol_energy(q: u32) -> f64 {
    (q as f64 - 1.0) / 6.0
}

/// Second moment of a uniform draw on `[lo, hi]`.
fn uniform_second_moment(lo: f64, hi: f64) -> f64 {
    (lo * lo + lo * hi + hi * hi) / 3.0
}

/// Monte Carlo mean-squared-error sweep over the configured grid.
///
/// `aggregator = awgn` transmits quantized random vectors (`N` entries
/// per device, entries uniform on `[grad_low, grad_high]`) through the
/// noisy digital pipeline and measures the squared distance between the
/// decoded and the exact average. `aggregator = fading` (or `analog`)
/// transmits one uncoded device symbol each, beamforms, and measures the
/// error of the recovered sum against the true sum — the concentration
/// experiment. When `snr_db_list` is present it sets the noise power per
/// point via `sigma_z2 = K * E_s * 10^(-snr/10)` (with `E_s` the mean
/// transmit symbol energy of the mode); otherwise `sigma_z2` is used
/// as-is and the `snr_db` column reports the implied value.
///
/// `abs_err_p99` is the 99th percentile of the pooled per-entry absolute
/// errors at the grid point.
pub fn run_mse_sweep(cfg: &ExperimentConfig) -> Result<CsvTable, HarnessError> {
    let digital = match cfg.aggregator {
        AggregateMode::Awgn => true,
        AggregateMode::Fading | AggregateMode::AnalogFading => false,
        AggregateMode::Ideal => {
            return Err(HarnessError::Invalid(
                "mse-sweep needs aggregator = awgn (digital pipeline) or fading (analog \
                 concentration); the ideal aggregator has no error to measure"
                    .to_string(),
            ))
        }
    };
    let mut table = CsvTable::new(&[
        "nr",
        "snr_db",
        "k",
        "trials",
        "mse_empirical",
        "mse_bound_awgn",
        "mse_bound_fading",
        "abs_err_p99",
    ]);
    let energy = if digital {
        digital_symbol_energy(cfg.q)
    } else {
        uniform_second_moment(cfg.grad_low, cfg.grad_high)
    };
    let snr_axis: Vec<Option<f64>> = match &cfg.snr_db_list {
        Some(list) => list.iter().copied().map(Some).collect(),
        None => vec![None],
    };

    for &k in &cfg.k_list {
        for &nr in &cfg.nr_list {
            for &snr in &snr_axis {
                if cfg.trials == 0 {
                    continue;
                }
                let (sigma_z2, snr_db) = match snr {
                    Some(db) => (k as f64 * energy * 10f64.powf(-db / 10.0), db),
                    None => (
                        cfg.sigma_z2,
                        10.0 * (k as f64 * energy / cfg.sigma_z2).log10(),
                    ),
                };
                let point = if digital {
                    digital_point(cfg, k, nr, sigma_z2)
                } else {
                    analog_point(cfg, k, nr, sigma_z2)
                };
                let awgn_bound = mse_awgn_bound(&AwgnBoundInput {
                    n: cfg.n,
                    k,
                    q: cfg.q,
                    delta_g: cfg.delta_g,
                    sigma_z2,
                    n_r: nr,
                })
                .total;
                let fading_bound = if sigma_z2 > 0.0 {
                    expected_abs_error_fading(&FadingBoundInput {
                        gamma: cfg.grad_low.abs().max(cfg.grad_high.abs()),
                        sigma_h: cfg.sigma_h2.sqrt(),
                        sigma_z: sigma_z2.sqrt(),
                        k,
                        n: if digital { cfg.n } else { 1 },
                        q: cfg.q,
                        n_r: nr,
                        epsilon: cfg.epsilon,
                        delta: cfg.delta,
                    })
                    .powi(2)
                } else {
                    0.0
                };
                table.push(vec![
                    nr.to_string(),
                    fmt(snr_db),
                    k.to_string(),
                    cfg.trials.to_string(),
                    fmt(point.mse),
                    fmt(awgn_bound),
                    fmt(fading_bound),
                    fmt(point.abs_p99),
                ]);
            }
        }
    }
    Ok(table)
}

struct PointStats {
    mse: f64,
    abs_p99: f64,
}

/// One digital grid point: quantize-encode-transmit-decode `trials`
/// random vector sets and average the squared error.
fn digital_point(cfg: &ExperimentConfig, k: u32, nr: u32, sigma_z2: f64) -> PointStats {
    let sys = SystemConfig::new(
        k,
        cfg.n,
        nr,
        cfg.q,
        cfg.sigma_h2,
        sigma_z2,
        cfg.p_max,
        cfg.channel,
    );
    let quant = QuantizerSpec::new(cfg.q, cfg.delta_g);
    let scaling = oac_powerctl::PowerScaling::neutral(k as usize);
    let n = cfg.n as usize;

    let per_trial: Vec<(f64, Vec<f64>)> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = derive_stream(cfg.seed, EXP_MSE, trial, 0, 0);
            let span = cfg.grad_high - cfg.grad_low;
            let grads: Vec<Vec<f64>> = (0..k)
                .map(|_| {
                    (0..n)
                        .map(|_| cfg.grad_low + span * rng.random::<f64>())
                        .collect()
                })
                .collect();
            let g_hat = aggregate(
                &grads,
                AggregateMode::Awgn,
                &sys,
                &quant,
                &scaling,
                &mut rng,
            );
            let inv = 1.0 / k as f64;
            let mut sq = 0.0;
            let mut abs = Vec::with_capacity(n);
            for i in 0..n {
                let ideal = grads.iter().map(|g| g[i]).sum::<f64>() * inv;
                let err = g_hat[i] - ideal;
                sq += err * err;
                abs.push(err.abs());
            }
            (sq, abs)
        })
        .collect();

    reduce_point(per_trial, cfg.trials)
}

/// One analog grid point: each device sends one uncoded symbol through
/// the fading channel; the beamformed sum is compared to the true sum.
fn analog_point(cfg: &ExperimentConfig, k: u32, nr: u32, sigma_z2: f64) -> PointStats {
    let sys = SystemConfig::new(
        k,
        1,
        nr,
        cfg.q,
        cfg.sigma_h2,
        sigma_z2,
        cfg.p_max,
        cfg.channel,
    );

    let per_trial: Vec<(f64, Vec<f64>)> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = derive_stream(cfg.seed, EXP_MSE, trial, 0, 0);
            let span = cfg.grad_high - cfg.grad_low;
            let sources: Vec<f64> = (0..k)
                .map(|_| cfg.grad_low + span * rng.random::<f64>())
                .collect();
            let symbols: Vec<Complex64> =
                sources.iter().map(|&s| Complex64::new(s, 0.0)).collect();
            let ch = sample_channel(&sys, &mut rng);
            let received = apply_mac(&symbols, &ch);
            let beam = sum_beamformer(&ch, &sys);
            let estimate = combine(&beam, &received);
            let target = sources.iter().sum::<f64>();
            let err = estimate - Complex64::new(target, 0.0);
            (err.norm_sqr(), vec![err.norm()])
        })
        .collect();

    reduce_point(per_trial, cfg.trials)
}

fn reduce_point(per_trial: Vec<(f64, Vec<f64>)>, trials: u64) -> PointStats {
    let mut sum = 0.0;
    let mut pooled = Vec::new();
    for (sq, abs) in per_trial {
        sum += sq;
        pooled.extend(abs);
    }
    PointStats {
        mse: sum / trials as f64,
        abs_p99: percentile_99(pooled),
    }
}

// ----------------------------------------------------------------- train

/// Builds the training dataset named by the config.
fn load_dataset(cfg: &ExperimentConfig) -> Result<Dataset, HarnessError> {
    match cfg.dataset {
        DatasetKind::Synthetic => {
            let mut rng = derive_stream(cfg.seed, EXP_TRAIN, TRIAL_SHARED, 0, 0);
            Ok(make_synthetic_dataset(
                cfg.classes,
                cfg.input_dim,
                cfg.samples_per_class,
                cfg.separation,
                &mut rng,
            ))
        }
        DatasetKind::Idx => {
            let dir = cfg.idx_dir.as_ref().ok_or_else(|| {
                HarnessError::Invalid(
                    "dataset = idx needs `idx_dir` in the config or --dataset-idx on the command \
                     line"
                        .to_string(),
                )
            })?;
            let dir = Path::new(dir);
            let data = dataset_from_idx(
                &dir.join("train-images-idx3-ubyte"),
                &dir.join("train-labels-idx1-ubyte"),
                &dir.join("t10k-images-idx3-ubyte"),
                &dir.join("t10k-labels-idx1-ubyte"),
                cfg.classes,
            )?;
            if data.feature_dim() != cfg.input_dim as usize {
                return Err(HarnessError::Invalid(format!(
                    "IDX images are {}-dimensional but the config says input_dim = {}",
                    data.feature_dim(),
                    cfg.input_dim
                )));
            }
            Ok(data)
        }
    }
}

/// Federated training, averaged over `trials` repetitions.
///
/// The dataset and its device partition are drawn once from dedicated
/// substreams; each trial then reruns training with its own model
/// initialization and channel noise. Emitted rows are per-round means
/// across trials (reduced in ascending trial order), so `trials = 5`
/// gives a 5-seed learning curve. The frame length of the simulated
/// system follows the model's parameter count.
pub fn run_train(cfg: &ExperimentConfig) -> Result<CsvTable, HarnessError> {
    let spec = LearnerSpec {
        family: cfg.model,
        input_dim: cfg.input_dim,
        class_count: cfg.classes,
        hidden_units: if cfg.model == oac_fel::LearnerFamily::OneHiddenLayerMlp {
            cfg.hidden
        } else {
            0
        },
        loss: cfg.loss,
    };
    let data = load_dataset(cfg)?;
    if data.train_len() % cfg.k as usize != 0 {
        return Err(HarnessError::Invalid(format!(
            "training set size {} is not divisible by K = {}",
            data.train_len(),
            cfg.k
        )));
    }
    let mode = match cfg.data_mode {
        DataMode::Iid => PartitionMode::Iid,
        DataMode::LabelSkew => PartitionMode::LabelSkew {
            shards_per_device: cfg.shards_per_device,
        },
    };
    if let PartitionMode::LabelSkew { shards_per_device } = mode {
        let shards = cfg.k as usize * shards_per_device as usize;
        if data.train_len() % shards != 0 {
            return Err(HarnessError::Invalid(format!(
                "training set size {} is not divisible into {} label shards",
                data.train_len(),
                shards
            )));
        }
    }
    let mut part_rng = derive_stream(cfg.seed, EXP_TRAIN, TRIAL_SHARED, 0, 1);
    let parts = partition(&data, cfg.k, mode, &mut part_rng);

    let n = spec.param_count() as u32;
    let sys = SystemConfig::new(
        cfg.k,
        n,
        cfg.n_r,
        cfg.q,
        cfg.sigma_h2,
        cfg.sigma_z2,
        cfg.p_max,
        cfg.channel,
    );
    let quant = QuantizerSpec::new(cfg.q, cfg.delta_g);
    let sizes = vec![parts.shard_size() as u64; cfg.k as usize];
    let scaling = select_beta(&sizes, &sys, cfg.beta_margin);
    let streams = HarnessStreams {
        master_seed: cfg.seed,
        experiment: EXP_TRAIN,
    };

    let curves: Vec<Vec<RoundMetrics>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let setup = TrainSetup {
                learner: spec,
                dataset: &data,
                partition: &parts,
                mode: cfg.aggregator,
                system: sys,
                quantizer: quant,
                scaling: scaling.clone(),
                eta: cfg.eta,
                rounds: cfg.rounds,
                batch_size: cfg.batch,
                local_epochs: cfg.local_epochs,
                streams: &streams,
                trial,
            };
            train(&setup).1
        })
        .collect();

    let mut table = CsvTable::new(&["round", "train_loss", "test_acc", "grad_mse", "grad_norm2"]);
    if cfg.trials == 0 {
        return Ok(table);
    }
    let inv = 1.0 / cfg.trials as f64;
    for round in 0..cfg.rounds as usize {
        let mut loss = 0.0;
        let mut acc = 0.0;
        let mut gmse = 0.0;
        let mut gnorm = 0.0;
        for curve in &curves {
            loss += curve[round].train_loss;
            acc += curve[round].test_accuracy;
            gmse += curve[round].grad_mse;
            gnorm += curve[round].grad_norm2;
        }
        table.push(vec![
            round.to_string(),
            fmt(loss * inv),
            fmt(acc * inv),
            fmt(gmse * inv),
            fmt(gnorm * inv),
        ]);
    }
    Ok(table)
}

// ---------------------------------------------------------------- bounds

/// Tabulates the analytic antenna and convergence bounds over `k_list`.
///
/// The payload magnitude bound is `max(|grad_low|, |grad_high|)`; the
/// convergence column evaluates the fixed-point inputs `conv_*` with the
/// configured `eta` and `rounds` (constant across rows).
pub fn run_bound_tables(cfg: &ExperimentConfig) -> Result<CsvTable, HarnessError> {
    if cfg.sigma_z2 <= 0.0 {
        return Err(HarnessError::Invalid(
            "bound tables need sigma_z2 > 0".to_string(),
        ));
    }
    if cfg.eta * cfg.conv_l >= 2.0 {
        return Err(HarnessError::Invalid(format!(
            "convergence bound needs eta * conv_l below 2, got {}",
            cfg.eta * cfg.conv_l
        )));
    }
    let conv = convergence_rhs(&ConvergenceInput {
        eta: cfg.eta,
        l_smooth: cfg.conv_l,
        t: cfg.rounds,
        loss_gap: cfg.conv_gap,
        sigma_ch2: cfg.conv_sigma_ch2,
        sigma_q2: cfg.conv_sigma_q2,
        theta_bar: cfg.conv_theta,
    });

    let mut table = CsvTable::new(&[
        "k",
        "nr_symbol",
        "nr_symbol_noise",
        "nr_gradient",
        "mse_bound_fading",
        "convergence_rhs",
    ]);
    for &k in &cfg.k_list {
        let input = FadingBoundInput {
            gamma: cfg.grad_low.abs().max(cfg.grad_high.abs()),
            sigma_h: cfg.sigma_h2.sqrt(),
            sigma_z: cfg.sigma_z2.sqrt(),
            k,
            n: cfg.n,
            q: cfg.q,
            n_r: cfg.n_r,
            epsilon: cfg.epsilon,
            delta: cfg.delta,
        };
        table.push(vec![
            k.to_string(),
            antenna_bound_symbol(&input).to_string(),
            antenna_bound_symbol_noise_scaled(&input).to_string(),
            antenna_bound_gradient(&input).to_string(),
            fmt(mse_fading_bound(&input, cfg.delta_g).total),
            fmt(conv),
        ]);
    }
    Ok(table)
}

// --------------------------------------------------------------- latency

/// Tabulates the analytic transmission-time model over `k_list`.
pub fn run_latency(cfg: &ExperimentConfig) -> Result<CsvTable, HarnessError> {
    let mut table = CsvTable::new(&["k", "t_ofdma", "t_analog", "t_compfed", "gamma_ratio"]);
    for &k in &cfg.k_list {
        let input = LatencyInput {
            bandwidth_hz: cfg.bandwidth_hz,
            symbol_time_s: cfg.symbol_time_s,
            n: cfg.n as f64,
            k,
            n_r: cfg.n_r,
            q: cfg.q,
            sigma_z2: cfg.sigma_z2,
            sigma_h2: cfg.sigma_h2,
            symbol_second_moment: cfg.symbol_energy,
            symbol_abs_moment: cfg.symbol_abs,
            delta_g: cfg.delta_g,
        };
        let report = latency_suite(&input);
        table.push(vec![
            k.to_string(),
            fmt(report.t_ofdma),
            fmt(report.t_analog),
            fmt(report.t_compfed),
            fmt(report.gamma_ratio),
        ]);
    }
    Ok(table)
}

// ------------------------------------------------------------------ tests
