//! Flat `key = value` experiment configuration.
//!
//! The format is deliberately small: one assignment per line, `#` starts
//! a comment, lists are comma-separated. Every key has a documented
//! default, unknown keys are rejected with their line number, and
//! [`ExperimentConfig::render`] emits text that reparses to an equal
//! config, so files can be regenerated mechanically.

use oac_airchannel::ChannelDist;
use oac_fel::{AggregateMode, LearnerFamily, Loss};
use std::collections::HashMap;
use std::fmt::Write as _;

// ------------------------------------------------------------------ errors

/// Parse/validation failures, each carrying the key and source line.
///
/// Line 0 marks a value that came from a default rather than the text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    /// A non-comment line is not of the form `key = value`.
    #[error("line {line}: `{text}` is not a `key = value` assignment")]
    Syntax {
        /// 1-based source line.
        line: usize,
        /// The offending text.
        text: String,
    },
    /// The key is not in the documented key list.
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey {
        /// The unrecognized key.
        key: String,
        /// 1-based source line.
        line: usize,
    },
    /// The value failed to parse as the key's type.
    #[error("line {line}: key `{key}`: {detail}")]
    TypeMismatch {
        /// The key whose value was malformed.
        key: String,
        /// 1-based source line.
        line: usize,
        /// What was expected and what was found.
        detail: String,
    },
    /// The value parsed but violates a documented invariant.
    #[error("line {line}: key `{key}`: {detail}")]
    Constraint {
        /// The key whose value is out of range.
        key: String,
        /// 1-based source line (0 when the value was a default).
        line: usize,
        /// The violated rule.
        detail: String,
    },
}

// ------------------------------------------------------------- enums

/// Where training data comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetKind {
    /// Gaussian clusters generated on the fly.
    Synthetic,
    /// IDX image/label files from `idx_dir`.
    Idx,
}

/// How the training split is dealt to devices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataMode {
    /// Uniform random disjoint shards.
    Iid,
    /// Label-sorted shards dealt `shards_per_device` at a time.
    LabelSkew,
}

// ------------------------------------------------------------- config

/// Every tunable of the simulator, with documented defaults.
///
/// Scalar system keys (`K`, `N`, `Nr`, `q`, noise powers) configure
/// single runs; the `*_list` keys are the sweep axes of the grid
/// commands. See the module docs of `runners` for which command reads
/// which keys.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Master seed all random streams derive from.
    pub seed: u64,
    /// Monte Carlo repetitions per grid point (or training repetitions).
    pub trials: u64,
    /// Output CSV path (CLI `--out` overrides).
    pub out: String,
    /// Device count.
    pub k: u32,
    /// Subchannel (frame entry) count.
    pub n: u32,
    /// Receive antenna count.
    pub n_r: u32,
    /// Modulation order (power of 4).
    pub q: u32,
    /// Per-coefficient channel variance.
    pub sigma_h2: f64,
    /// Receiver noise variance.
    pub sigma_z2: f64,
    /// Per-device transmit power budget.
    pub p_max: f64,
    /// Channel coefficient distribution.
    pub channel: ChannelDist,
    /// Which uplink carries the payload.
    pub aggregator: AggregateMode,
    /// Quantizer half-range (clip level).
    pub delta_g: f64,
    /// Power-control headroom multiplier (at least 1).
    pub beta_margin: f64,
    /// Lower end of the random payload range in sweeps.
    pub grad_low: f64,
    /// Upper end of the random payload range in sweeps.
    pub grad_high: f64,
    /// Model family.
    pub model: LearnerFamily,
    /// Hidden units (MLP only).
    pub hidden: u32,
    /// Training loss.
    pub loss: Loss,
    /// Data source.
    pub dataset: DatasetKind,
    /// Directory of IDX files (required when `dataset = idx`).
    pub idx_dir: Option<String>,
    /// Class count.
    pub classes: u32,
    /// Feature dimension.
    pub input_dim: u32,
    /// Synthetic samples generated per class (80% become training data).
    pub samples_per_class: u32,
    /// Distance of each synthetic class mean from the origin.
    pub separation: f64,
    /// Shard assignment policy.
    pub data_mode: DataMode,
    /// Label-sorted shards dealt to each device in label-skew mode.
    pub shards_per_device: u32,
    /// Local mini-batch size.
    pub batch: usize,
    /// Local epochs per round (0 sends one plain gradient).
    pub local_epochs: u32,
    /// Learning rate.
    pub eta: f64,
    /// Communication rounds.
    pub rounds: u32,
    /// Antenna sweep axis.
    pub nr_list: Vec<u32>,
    /// SNR sweep axis in dB; absent means "use `sigma_z2` directly".
    pub snr_db_list: Option<Vec<f64>>,
    /// Modulation-order sweep axis.
    pub q_list: Vec<u32>,
    /// Device-count sweep axis.
    pub k_list: Vec<u32>,
    /// Absolute error tolerance of the concentration bounds.
    pub epsilon: f64,
    /// Outage probability of the concentration bounds.
    pub delta: f64,
    /// Initial optimality gap fed to the convergence bound.
    pub conv_gap: f64,
    /// Smoothness constant fed to the convergence bound.
    pub conv_l: f64,
    /// Gradient heterogeneity fed to the convergence bound.
    pub conv_theta: f64,
    /// Channel-error variance fed to the convergence bound.
    pub conv_sigma_ch2: f64,
    /// Quantization-error variance fed to the convergence bound.
    pub conv_sigma_q2: f64,
    /// Bandwidth in Hz for latency accounting.
    pub bandwidth_hz: f64,
    /// Over-the-air symbol duration in seconds.
    pub symbol_time_s: f64,
    /// Mean squared source symbol (latency accounting).
    pub symbol_energy: f64,
    /// Mean absolute source symbol (latency accounting).
    pub symbol_abs: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 100,
            out: "out.csv".to_string(),
            k: 20,
            n: 100,
            n_r: 100,
            q: 64,
            sigma_h2: 1.0,
            sigma_z2: 1.0,
            p_max: 1e12,
            channel: ChannelDist::ComplexGaussian,
            aggregator: AggregateMode::Ideal,
            delta_g: 1.0,
            beta_margin: 1.1,
            grad_low: 0.0,
            grad_high: 1.0,
            model: LearnerFamily::SoftmaxRegression,
            hidden: 16,
            loss: Loss::CrossEntropy,
            dataset: DatasetKind::Synthetic,
            idx_dir: None,
            classes: 3,
            input_dim: 20,
            samples_per_class: 150,
            separation: 4.0,
            data_mode: DataMode::Iid,
            shards_per_device: 2,
            batch: 128,
            local_epochs: 0,
            eta: 0.1,
            rounds: 100,
            nr_list: vec![100],
            snr_db_list: None,
            q_list: vec![64],
            k_list: vec![20],
            epsilon: 0.5,
            delta: 0.01,
            conv_gap: 1.0,
            conv_l: 1.0,
            conv_theta: 0.0,
            conv_sigma_ch2: 0.0,
            conv_sigma_q2: 0.0,
            bandwidth_hz: 1000.0,
            symbol_time_s: 1e-3,
            symbol_energy: 1.0 / 3.0,
            symbol_abs: 0.5,
        }
    }
}

// ------------------------------------------------------------- parsing

fn type_err<T>(key: &str, line: usize, expected: &str, got: &str) -> Result<T, ConfigError> {
    Err(ConfigError::TypeMismatch {
        key: key.to_string(),
        line,
        detail: format!("expected {}, got `{}`", expected, got),
    })
}

fn parse_u32(key: &str, value: &str, line: usize) -> Result<u32, ConfigError> {
    value
        .parse()
        .or_else(|_| type_err(key, line, "an unsigned integer", value))
}

fn parse_u64(key: &str, value: &str, line: usize) -> Result<u64, ConfigError> {
    value
        .parse()
        .or_else(|_| type_err(key, line, "an unsigned integer", value))
}

fn parse_usize(key: &str, value: &str, line: usize) -> Result<usize, ConfigError> {
    value
        .parse()
        .or_else(|_| type_err(key, line, "an unsigned integer", value))
}

fn parse_f64(key: &str, value: &str, line: usize) -> Result<f64, ConfigError> {
    value
        .parse()
        .or_else(|_| type_err(key, line, "a number", value))
}

fn parse_u32_list(key: &str, value: &str, line: usize) -> Result<Vec<u32>, ConfigError> {
    value
        .split(',')
        .map(|item| parse_u32(key, item.trim(), line))
        .collect()
}

fn parse_f64_list(key: &str, value: &str, line: usize) -> Result<Vec<f64>, ConfigError> {
    value
        .split(',')
        .map(|item| parse_f64(key, item.trim(), line))
        .collect()
}

fn parse_token<T: Copy>(
    key: &str,
    value: &str,
    line: usize,
    table: &[(&str, T)],
) -> Result<T, ConfigError> {
    for &(token, parsed) in table {
        if value == token {
            return Ok(parsed);
        }
    }
    let expected = table
        .iter()
        .map(|&(token, _)| format!("`{}`", token))
        .collect::<Vec<_>>()
        .join(", ");
    type_err(key, line, &format!("one of {}", expected), value)
}

const CHANNEL_TOKENS: &[(&str, ChannelDist)] = &[
    ("complex", ChannelDist::ComplexGaussian),
    ("real", ChannelDist::RealGaussian),
];
const AGGREGATOR_TOKENS: &[(&str, AggregateMode)] = &[
    ("ideal", AggregateMode::Ideal),
    ("awgn", AggregateMode::Awgn),
    ("fading", AggregateMode::Fading),
    ("analog", AggregateMode::AnalogFading),
];
const MODEL_TOKENS: &[(&str, LearnerFamily)] = &[
    ("linear", LearnerFamily::LinearRegression),
    ("softmax", LearnerFamily::SoftmaxRegression),
    ("mlp", LearnerFamily::OneHiddenLayerMlp),
];
const LOSS_TOKENS: &[(&str, Loss)] = &[
    ("squared", Loss::SquaredError),
    ("cross-entropy", Loss::CrossEntropy),
];
const DATASET_TOKENS: &[(&str, DatasetKind)] = &[
    ("synthetic", DatasetKind::Synthetic),
    ("idx", DatasetKind::Idx),
];
const DATA_MODE_TOKENS: &[(&str, DataMode)] =
    &[("iid", DataMode::Iid), ("label-skew", DataMode::LabelSkew)];

fn token_of<T: PartialEq>(value: T, table: &[(&'static str, T)]) -> &'static str {
    table
        .iter()
        .find(|(_, parsed)| *parsed == value)
        .map(|&(token, _)| token)
        .expect("every enum variant has a token")
}

/// Parses a configuration file, filling omitted keys with defaults.
///
/// On repeated keys the last assignment wins. Errors carry the key name
/// and source line.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = ExperimentConfig::default();
    let mut lines: HashMap<&'static str, usize> = HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            continue;
        }
        let Some((key, value)) = stripped.split_once('=') else {
            return Err(ConfigError::Syntax {
                line: line_no,
                text: stripped.to_string(),
            });
        };
        let key = key.trim();
        let value = value.trim();
        apply_key(&mut cfg, &mut lines, key, value, line_no)?;
    }

    validate(&cfg, &lines)?;
    Ok(cfg)
}

fn apply_key(
    cfg: &mut ExperimentConfig,
    lines: &mut HashMap<&'static str, usize>,
    key: &str,
    value: &str,
    line: usize,
) -> Result<(), ConfigError> {
    // Records the canonical (static) key name so constraint checks can
    // point back at the source line.
    macro_rules! set {
        ($name:literal, $field:expr, $parsed:expr) => {{
            $field = $parsed?;
            lines.insert($name, line);
        }};
    }
    match key {
        "seed" => set!("seed", cfg.seed, parse_u64(key, value, line)),
        "trials" => set!("trials", cfg.trials, parse_u64(key, value, line)),
        "out" => set!("out", cfg.out, Ok::<_, ConfigError>(value.to_string())),
        "K" => set!("K", cfg.k, parse_u32(key, value, line)),
        "N" => set!("N", cfg.n, parse_u32(key, value, line)),
        "Nr" => set!("Nr", cfg.n_r, parse_u32(key, value, line)),
        "q" => set!("q", cfg.q, parse_u32(key, value, line)),
        "sigma_h2" => set!("sigma_h2", cfg.sigma_h2, parse_f64(key, value, line)),
        "sigma_z2" => set!("sigma_z2", cfg.sigma_z2, parse_f64(key, value, line)),
        "p_max" => set!("p_max", cfg.p_max, parse_f64(key, value, line)),
        "channel" => set!("channel", cfg.channel, parse_token(key, value, line, CHANNEL_TOKENS)),
        "aggregator" => set!(
            "aggregator",
            cfg.aggregator,
            parse_token(key, value, line, AGGREGATOR_TOKENS)
        ),
        "delta_g" => set!("delta_g", cfg.delta_g, parse_f64(key, value, line)),
        "beta_margin" => set!("beta_margin", cfg.beta_margin, parse_f64(key, value, line)),
        "grad_low" => set!("grad_low", cfg.grad_low, parse_f64(key, value, line)),
        "grad_high" => set!("grad_high", cfg.grad_high, parse_f64(key, value, line)),
        "model" => set!("model", cfg.model, parse_token(key, value, line, MODEL_TOKENS)),
        "hidden" => set!("hidden", cfg.hidden, parse_u32(key, value, line)),
        "loss" => set!("loss", cfg.loss, parse_token(key, value, line, LOSS_TOKENS)),
        "dataset" => set!("dataset", cfg.dataset, parse_token(key, value, line, DATASET_TOKENS)),
        "idx_dir" => set!("idx_dir", cfg.idx_dir, Ok::<_, ConfigError>(Some(value.to_string()))),
        "classes" => set!("classes", cfg.classes, parse_u32(key, value, line)),
        "input_dim" => set!("input_dim", cfg.input_dim, parse_u32(key, value, line)),
        "samples_per_class" => set!(
            "samples_per_class",
            cfg.samples_per_class,
            parse_u32(key, value, line)
        ),
        "separation" => set!("separation", cfg.separation, parse_f64(key, value, line)),
        "data_mode" => set!(
            "data_mode",
            cfg.data_mode,
            parse_token(key, value, line, DATA_MODE_TOKENS)
        ),
        "shards_per_device" => set!(
            "shards_per_device",
            cfg.shards_per_device,
            parse_u32(key, value, line)
        ),
        "batch" => set!("batch", cfg.batch, parse_usize(key, value, line)),
        "local_epochs" => set!("local_epochs", cfg.local_epochs, parse_u32(key, value, line)),
        "eta" => set!("eta", cfg.eta, parse_f64(key, value, line)),
        "rounds" => set!("rounds", cfg.rounds, parse_u32(key, value, line)),
        "nr_list" => set!("nr_list", cfg.nr_list, parse_u32_list(key, value, line)),
        "snr_db_list" => set!(
            "snr_db_list",
            cfg.snr_db_list,
            parse_f64_list(key, value, line).map(Some)
        ),
        "q_list" => set!("q_list", cfg.q_list, parse_u32_list(key, value, line)),
        "k_list" => set!("k_list", cfg.k_list, parse_u32_list(key, value, line)),
        "epsilon" => set!("epsilon", cfg.epsilon, parse_f64(key, value, line)),
        "delta" => set!("delta", cfg.delta, parse_f64(key, value, line)),
        "conv_gap" => set!("conv_gap", cfg.conv_gap, parse_f64(key, value, line)),
        "conv_l" => set!("conv_l", cfg.conv_l, parse_f64(key, value, line)),
        "conv_theta" => set!("conv_theta", cfg.conv_theta, parse_f64(key, value, line)),
        "conv_sigma_ch2" => set!(
            "conv_sigma_ch2",
            cfg.conv_sigma_ch2,
            parse_f64(key, value, line)
        ),
        "conv_sigma_q2" => set!(
            "conv_sigma_q2",
            cfg.conv_sigma_q2,
            parse_f64(key, value, line)
        ),
        "bandwidth_hz" => set!("bandwidth_hz", cfg.bandwidth_hz, parse_f64(key, value, line)),
        "symbol_time_s" => set!("symbol_time_s", cfg.symbol_time_s, parse_f64(key, value, line)),
        "symbol_energy" => set!("symbol_energy", cfg.symbol_energy, parse_f64(key, value, line)),
        "symbol_abs" => set!("symbol_abs", cfg.symbol_abs, parse_f64(key, value, line)),
        _ => {
            return Err(ConfigError::UnknownKey {
                key: key.to_string(),
                line,
            })
        }
    }
    Ok(())
}

// --------------------------------------------------------- validation

fn is_power_of_four(q: u32) -> bool {
    q >= 4 && q.is_power_of_two() && q.trailing_zeros().is_multiple_of(2)
}

fn constraint(key: &'static str, lines: &HashMap<&'static str, usize>, detail: String) -> ConfigError {
    ConfigError::Constraint {
        key: key.to_string(),
        line: lines.get(key).copied().unwrap_or(0),
        detail,
    }
}

fn validate(cfg: &ExperimentConfig, lines: &HashMap<&'static str, usize>) -> Result<(), ConfigError> {
    let fail = |key, detail| Err(constraint(key, lines, detail));

    if cfg.k < 1 {
        return fail("K", "device count must be at least 1".into());
    }
    if cfg.n < 1 {
        return fail("N", "subchannel count must be at least 1".into());
    }
    if cfg.n_r < 1 {
        return fail("Nr", "antenna count must be at least 1".into());
    }
    if !is_power_of_four(cfg.q) {
        return fail("q", format!("q must be a power of 4, got {}", cfg.q));
    }
    for &q in &cfg.q_list {
        if !is_power_of_four(q) {
            return fail("q_list", format!("q must be a power of 4, got {}", q));
        }
    }
    if !(cfg.sigma_h2.is_finite() && cfg.sigma_h2 > 0.0) {
        return fail("sigma_h2", "channel variance must be positive".into());
    }
    if !(cfg.sigma_z2.is_finite() && cfg.sigma_z2 >= 0.0) {
        return fail("sigma_z2", "noise variance must be nonnegative".into());
    }
    if !(cfg.p_max.is_finite() && cfg.p_max > 0.0) {
        return fail("p_max", "power budget must be positive".into());
    }
    if !(cfg.delta_g.is_finite() && cfg.delta_g > 0.0) {
        return fail("delta_g", "quantizer half-range must be positive".into());
    }
    if !(cfg.beta_margin.is_finite() && cfg.beta_margin >= 1.0) {
        return fail("beta_margin", "power margin must be at least 1".into());
    }
    if !(cfg.grad_low.is_finite() && cfg.grad_high.is_finite() && cfg.grad_high > cfg.grad_low) {
        return fail(
            "grad_high",
            format!(
                "payload range [{}, {}] must be nonempty and finite",
                cfg.grad_low, cfg.grad_high
            ),
        );
    }
    match (cfg.model, cfg.loss) {
        (LearnerFamily::LinearRegression, Loss::CrossEntropy) => {
            return fail(
                "loss",
                "model `linear` trains with the squared-error loss; set `loss = squared`".into(),
            )
        }
        (LearnerFamily::SoftmaxRegression, Loss::SquaredError) => {
            return fail(
                "loss",
                "model `softmax` trains with the cross-entropy loss; set `loss = cross-entropy`"
                    .into(),
            )
        }
        _ => {}
    }
    if cfg.model == LearnerFamily::OneHiddenLayerMlp && cfg.hidden < 1 {
        return fail("hidden", "the MLP needs at least 1 hidden unit".into());
    }
    if cfg.classes < 1 {
        return fail("classes", "class count must be at least 1".into());
    }
    if cfg.model == LearnerFamily::SoftmaxRegression && cfg.classes < 2 {
        return fail("classes", "softmax regression needs at least 2 classes".into());
    }
    if cfg.dataset == DatasetKind::Synthetic && cfg.input_dim < cfg.classes {
        return fail(
            "input_dim",
            format!(
                "synthetic data needs input_dim >= classes ({} < {})",
                cfg.input_dim, cfg.classes
            ),
        );
    }
    if cfg.samples_per_class < 2 {
        return fail(
            "samples_per_class",
            "at least 2 samples per class are needed for a train/test split".into(),
        );
    }
    if !(cfg.separation.is_finite() && cfg.separation >= 0.0) {
        return fail("separation", "class separation must be nonnegative".into());
    }
    if cfg.data_mode == DataMode::LabelSkew && cfg.shards_per_device < 1 {
        return fail("shards_per_device", "at least 1 shard per device".into());
    }
    if cfg.batch < 1 {
        return fail("batch", "batch size must be at least 1".into());
    }
    if !(cfg.eta.is_finite() && cfg.eta > 0.0) {
        return fail("eta", "learning rate must be positive".into());
    }
    if cfg.nr_list.is_empty() {
        return fail("nr_list", "sweep list must be nonempty".into());
    }
    if cfg.q_list.is_empty() {
        return fail("q_list", "sweep list must be nonempty".into());
    }
    if cfg.k_list.is_empty() {
        return fail("k_list", "sweep list must be nonempty".into());
    }
    if matches!(&cfg.snr_db_list, Some(list) if list.is_empty()) {
        return fail("snr_db_list", "sweep list must be nonempty when given".into());
    }
    for &nr in &cfg.nr_list {
        if nr < 1 {
            return fail("nr_list", "antenna counts must be at least 1".into());
        }
    }
    for &k in &cfg.k_list {
        if k < 1 {
            return fail("k_list", "device counts must be at least 1".into());
        }
    }
    if !(cfg.epsilon.is_finite() && cfg.epsilon > 0.0) {
        return fail("epsilon", "error tolerance must be positive".into());
    }
    if !(cfg.delta > 0.0 && cfg.delta < 1.0) {
        return fail("delta", "outage probability must lie in (0, 1)".into());
    }
    if !(cfg.conv_l.is_finite() && cfg.conv_l > 0.0) {
        return fail("conv_l", "smoothness constant must be positive".into());
    }
    for (key, value) in [
        ("conv_gap", cfg.conv_gap),
        ("conv_theta", cfg.conv_theta),
        ("conv_sigma_ch2", cfg.conv_sigma_ch2),
        ("conv_sigma_q2", cfg.conv_sigma_q2),
    ] {
        if !(value.is_finite() && value >= 0.0) {
            return fail(key, "convergence-bound inputs must be nonnegative".into());
        }
    }
    for (key, value) in [
        ("bandwidth_hz", cfg.bandwidth_hz),
        ("symbol_time_s", cfg.symbol_time_s),
        ("symbol_energy", cfg.symbol_energy),
        ("symbol_abs", cfg.symbol_abs),
    ] {
        if !(value.is_finite() && value > 0.0) {
            return fail(key, "latency inputs must be positive".into());
        }
    }
    if cfg.out.is_empty() {
        return fail("out", "output path must be nonempty".into());
    }
    Ok(())
}

// ------------------------------------------------------------- render

impl ExperimentConfig {
    /// Renders the full configuration (every key, fixed order) as text
    /// that [`parse_config`] reparses to an equal value.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let list_u32 = |list: &[u32]| {
            list.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "trials = {}", self.trials);
        let _ = writeln!(s, "out = {}", self.out);
        let _ = writeln!(s, "K = {}", self.k);
        let _ = writeln!(s, "N = {}", self.n);
        let _ = writeln!(s, "Nr = {}", self.n_r);
        let _ = writeln!(s, "q = {}", self.q);
        let _ = writeln!(s, "sigma_h2 = {}", self.sigma_h2);
        let _ = writeln!(s, "sigma_z2 = {}", self.sigma_z2);
        let _ = writeln!(s, "p_max = {}", self.p_max);
        let _ = writeln!(s, "channel = {}", token_of(self.channel, CHANNEL_TOKENS));
        let _ = writeln!(s, "aggregator = {}", token_of(self.aggregator, AGGREGATOR_TOKENS));
        let _ = writeln!(s, "delta_g = {}", self.delta_g);
        let _ = writeln!(s, "beta_margin = {}", self.beta_margin);
        let _ = writeln!(s, "grad_low = {}", self.grad_low);
        let _ = writeln!(s, "grad_high = {}", self.grad_high);
        let _ = writeln!(s, "model = {}", token_of(self.model, MODEL_TOKENS));
        let _ = writeln!(s, "hidden = {}", self.hidden);
        let _ = writeln!(s, "loss = {}", token_of(self.loss, LOSS_TOKENS));
        let _ = writeln!(s, "dataset = {}", token_of(self.dataset, DATASET_TOKENS));
        if let Some(dir) = &self.idx_dir {
            let _ = writeln!(s, "idx_dir = {}", dir);
        }
        let _ = writeln!(s, "classes = {}", self.classes);
        let _ = writeln!(s, "input_dim = {}", self.input_dim);
        let _ = writeln!(s, "samples_per_class = {}", self.samples_per_class);
        let _ = writeln!(s, "separation = {}", self.separation);
        let _ = writeln!(s, "data_mode = {}", token_of(self.data_mode, DATA_MODE_TOKENS));
        let _ = writeln!(s, "shards_per_device = {}", self.shards_per_device);
        let _ = writeln!(s, "batch = {}", self.batch);
        let _ = writeln!(s, "local_epochs = {}", self.local_epochs);
        let _ = writeln!(s, "eta = {}", self.eta);
        let _ = writeln!(s, "rounds = {}", self.rounds);
        let _ = writeln!(s, "nr_list = {}", list_u32(&self.nr_list));
        if let Some(list) = &self.snr_db_list {
            let rendered = list
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            let _ = writeln!(s, "snr_db_list = {}", rendered);
        }
        let _ = writeln!(s, "q_list = {}", list_u32(&self.q_list));
        let _ = writeln!(s, "k_list = {}", list_u32(&self.k_list));
        let _ = writeln!(s, "epsilon = {}", self.epsilon);
        let _ = writeln!(s, "delta = {}", self.delta);
        let _ = writeln!(s, "conv_gap = {}", self.conv_gap);
        let _ = writeln!(s, "conv_l = {}", self.conv_l);
        let _ = writeln!(s, "conv_theta = {}", self.conv_theta);
        let _ = writeln!(s, "conv_sigma_ch2 = {}", self.conv_sigma_ch2);
        let _ = writeln!(s, "conv_sigma_q2 = {}", self.conv_sigma_q2);
        let _ = writeln!(s, "bandwidth_hz = {}", self.bandwidth_hz);
        let _ = writeln!(s, "symbol_time_s = {}", self.symbol_time_s);
        let _ = writeln!(s, "symbol_energy = {}", self.symbol_energy);
        let _ = writeln!(s, "symbol_abs = {}", self.symbol_abs);
        s
    }
}

// ------------------------------------------------------------------ tests
