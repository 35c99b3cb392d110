//! `oac` — command-line front end for the over-the-air computation
//! simulator. Each subcommand reads a flat `key = value` config file,
//! runs one experiment pipeline, and writes a CSV table.

use clap::{Args, Parser, Subcommand};
use oac_harness::config::{parse_config, DatasetKind, ExperimentConfig};
use oac_harness::runners::{
    run_bound_tables, run_latency, run_mse_sweep, run_train, CsvTable, HarnessError,
};
use std::path::PathBuf;
use std::process::ExitCode;

/// Simulator for digital over-the-air gradient aggregation: Monte Carlo
/// error sweeps, federated training runs, and analytic bound tables,
/// all reproducible from a single seed.
#[derive(Debug, Parser)]
#[command(name = "oac", version, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand.
#[derive(Debug, Args)]
struct RunArgs {
    /// Path to the experiment config (flat `key = value` lines,
    /// `#` comments; run with an empty file to accept every default).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,

    /// Output CSV path; overrides the config's `out` key.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Master seed; overrides the config's `seed` key.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,

    /// Directory holding `train-images-idx3-ubyte`,
    /// `train-labels-idx1-ubyte`, `t10k-images-idx3-ubyte`, and
    /// `t10k-labels-idx1-ubyte`; selects the IDX dataset and overrides
    /// the config's `idx_dir` key.
    #[arg(long, value_name = "DIR")]
    dataset_idx: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte Carlo aggregation-error sweep over a parameter grid.
    ///
    /// Columns: `nr` (receive antennas), `snr_db` (received-sum SNR in
    /// dB; set through `snr_db_list` or implied by `sigma_z2`), `k`
    /// (devices), `trials` (Monte Carlo repetitions), `mse_empirical`
    /// (mean squared aggregation error), `mse_bound_awgn` (analytic
    /// digital-pipeline bound), `mse_bound_fading` (squared analytic
    /// fading concentration bound; 0 when noise-free), `abs_err_p99`
    /// (99th percentile of absolute per-entry error). One row per
    /// `k_list` x `nr_list` x SNR grid point.
    MseSweep(RunArgs),

    /// Federated training over the simulated channel.
    ///
    /// Columns: `round` (0-based communication round), `train_loss`
    /// (post-update training loss), `test_acc` (post-update test
    /// accuracy), `grad_mse` (squared distance between the aggregated
    /// and the exact average gradient), `grad_norm2` (squared norm of
    /// the exact average gradient). Each value is the mean over
    /// `trials` independent runs that share one dataset and partition.
    Train(RunArgs),

    /// Analytic antenna-count and convergence bound tables.
    ///
    /// Columns: `k` (devices, from `k_list`), `nr_symbol` (antennas
    /// sufficient for one aggregated symbol), `nr_symbol_noise` (same,
    /// with the noise-scaled constant), `nr_gradient` (antennas
    /// sufficient for a full gradient), `mse_bound_fading` (analytic
    /// fading-aggregation error bound), `convergence_rhs` (analytic
    /// optimality-gap bound after `rounds` steps; constant per table).
    Bounds(RunArgs),

    /// Analytic transmission-latency comparison.
    ///
    /// Columns: `k` (devices, from `k_list`), `t_ofdma` (orthogonalized
    /// digital uplink seconds), `t_analog` (uncoded analog aggregation
    /// seconds), `t_compfed` (digital over-the-air aggregation
    /// seconds), `gamma_ratio` (analog-to-digital log-distortion ratio;
    /// approaches 1 as `q` grows). A scheme whose achievable rate is
    /// zero reports infinite latency.
    Latency(RunArgs),
}

fn load_config(args: &RunArgs) -> Result<ExperimentConfig, HarnessError> {
    let text = std::fs::read_to_string(&args.config)?;
    let mut cfg = parse_config(&text)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(dir) = &args.dataset_idx {
        cfg.dataset = DatasetKind::Idx;
        cfg.idx_dir = Some(dir.display().to_string());
    }
    if let Some(out) = &args.out {
        cfg.out = out.display().to_string();
    }
    Ok(cfg)
}

fn execute(command: &Command) -> Result<(), HarnessError> {
    let args = match command {
        Command::MseSweep(args)
        | Command::Train(args)
        | Command::Bounds(args)
        | Command::Latency(args) => args,
    };
    let cfg = load_config(args)?;
    let table: CsvTable = match command {
        Command::MseSweep(_) => run_mse_sweep(&cfg)?,
        Command::Train(_) => run_train(&cfg)?,
        Command::Bounds(_) => run_bound_tables(&cfg)?,
        Command::Latency(_) => run_latency(&cfg)?,
    };
    std::fs::write(&cfg.out, table.to_csv())?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
