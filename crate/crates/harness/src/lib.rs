//! Experiment harness for the over-the-air computation simulator.
//!
//! The crate ties the numeric libraries together behind a small,
//! reproducible surface:
//!
//! * [`config`] — a flat `key = value` experiment description with
//!   defaults, strict validation, and a canonical renderer.
//! * [`streams`] — a stable mapping from `(master seed, experiment,
//!   trial, round, subchannel)` labels to independent random streams,
//!   so results do not depend on scheduling or thread count.
//! * [`runners`] — the four pipelines (`mse-sweep`, `train`, `bounds`,
//!   `latency`) that turn a config into a CSV table.
//!
//! The `oac` binary in this crate exposes the runners on the command
//! line; see its `--help` output for the column contracts.

pub mod config;
pub mod runners;
pub mod streams;

pub use config::{parse_config, ConfigError, DataMode, DatasetKind, ExperimentConfig};
pub use runners::{run_bound_tables, run_latency, run_mse_sweep, run_train, CsvTable, HarnessError};
pub use streams::{
    derive_stream, HarnessStreams, EXP_BOUNDS, EXP_LATENCY, EXP_MSE, EXP_TRAIN, TRIAL_SHARED,
};
