//! The federated round loop.
//!
//! Each round: every device computes a local (effective) gradient, the
//! gradients cross the configured uplink, and the server applies one
//! global step `w <- w - eta * g_hat`, recording metrics. All randomness
//! flows through a [`StreamSource`], so a fixed master seed reproduces a
//! run bit for bit regardless of when or where substreams are consumed.

use crate::aggregate_impl::{aggregate, AggregateMode};
use crate::data::{DataPartition, Dataset};
use crate::learner::{evaluate, local_gradient, LearnerSpec, LearnerState};
use oac_airchannel::SystemConfig;
use oac_codec::QuantizerSpec;
use oac_powerctl::PowerScaling;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

// ---------------------------------------------------------------- streams

/// Deterministic supplier of independent random streams addressed by
/// `(trial, round, subchannel)` labels.
///
/// The `subchannel` label doubles as a purpose code inside the trainer:
/// ids below [`STREAM_DEVICE_BASE`] address per-entry channel streams in
/// sweep harnesses, [`STREAM_DEVICE_BASE`]` + k` is device `k`'s local
/// mini-batch stream, [`STREAM_CHANNEL`] is the round's uplink stream,
/// and [`STREAM_INIT`] (at round 0) seeds the model initialization.
pub trait StreamSource {
    /// A fresh generator for the labeled substream; the same labels must
    /// always yield the same stream.
    fn stream(&self, trial: u64, round: u32, subchannel: u32) -> ChaCha8Rng;
}

/// Subchannel label of the model-initialization stream.
pub const STREAM_INIT: u32 = u32::MAX;
/// Subchannel label of a round's uplink (channel + noise) stream.
pub const STREAM_CHANNEL: u32 = u32::MAX - 1;
/// Base of the per-device local-SGD stream labels (device `k` uses
/// `STREAM_DEVICE_BASE + k`).
pub const STREAM_DEVICE_BASE: u32 = 1 << 31;

/// Small multiply-xor label mixer implementing [`StreamSource`] — enough
/// for tests, examples, and self-contained runs. Experiment harnesses
/// supply their own hash-based source with documented derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MixStreams {
    /// Master seed every substream derives from.
    pub master_seed: u64,
}

impl MixStreams {
    fn mix(mut z: u64) -> u64 {
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
}

impl StreamSource for MixStreams {
    fn stream(&self, trial: u64, round: u32, subchannel: u32) -> ChaCha8Rng {
        const WEYL: u64 = 0x9e37_79b9_7f4a_7c15;
        let mut s = Self::mix(self.master_seed ^ WEYL.wrapping_mul(trial.wrapping_add(1)));
        s = Self::mix(s ^ WEYL.wrapping_mul(u64::from(round) + 1));
        s = Self::mix(s ^ WEYL.wrapping_mul(u64::from(subchannel) + 1));
        ChaCha8Rng::seed_from_u64(s)
    }
}

// ---------------------------------------------------------------- metrics

/// Per-round training record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundMetrics {
    /// Round index (0-based).
    pub round: u32,
    /// Mean training loss after the round's update.
    pub train_loss: f64,
    /// Test accuracy after the round's update.
    pub test_accuracy: f64,
    /// Squared distance between the ideal average gradient and the
    /// aggregate the channel delivered this round.
    pub grad_mse: f64,
    /// Squared norm of the ideal average gradient this round.
    pub grad_norm2: f64,
}

// ------------------------------------------------------------------ setup

/// Everything one training run needs.
#[derive(Debug, Clone)]
pub struct TrainSetup<'a, S: StreamSource> {
    /// Model family, shape, and loss.
    pub learner: LearnerSpec,
    /// Train/test data.
    pub dataset: &'a Dataset,
    /// Device shards over the training split.
    pub partition: &'a DataPartition,
    /// Which uplink carries the gradients.
    pub mode: AggregateMode,
    /// Channel configuration (`k` must match the partition).
    pub system: SystemConfig,
    /// Quantizer / clip range of the transmit side.
    pub quantizer: QuantizerSpec,
    /// Per-device power scaling.
    pub scaling: PowerScaling,
    /// Global and local learning rate.
    pub eta: f64,
    /// Number of communication rounds.
    pub rounds: u32,
    /// Local mini-batch size.
    pub batch_size: usize,
    /// Local epochs per round (0 sends one plain gradient).
    pub local_epochs: u32,
    /// Substream supplier.
    pub streams: &'a S,
    /// Trial label passed to every stream request.
    pub trial: u64,
}

/// Runs the federated loop and returns the final state with one
/// [`RoundMetrics`] entry per round (evaluated after that round's
/// update). Model parameters initialize to `0.01 * N(0,1)` drawn from
/// the [`STREAM_INIT`] stream, so every mode at the same trial starts
/// from the same point.
///
/// # Panics
///
/// Panics if the partition's device count differs from `system.k`, if
/// the dataset's splits are empty, or via any component precondition.
pub fn train<S: StreamSource>(setup: &TrainSetup<'_, S>) -> (LearnerState, Vec<RoundMetrics>) {
    setup.learner.validate();
    let k = setup.system.k as usize;
    assert!(
        setup.partition.device_count() == k,
        "partition covers {} devices but the system expects {}",
        setup.partition.device_count(),
        k
    );
    assert!(setup.dataset.train_len() >= 1, "training split is empty");
    assert!(setup.dataset.test_len() >= 1, "test split is empty");
    assert!(
        setup.eta.is_finite() && setup.eta > 0.0,
        "learning rate must be positive, got {}",
        setup.eta
    );

    let mut init_rng = setup.streams.stream(setup.trial, 0, STREAM_INIT);
    let w: Vec<f64> = (0..setup.learner.param_count())
        .map(|_| 0.01 * init_rng.sample::<f64, _>(StandardNormal))
        .collect();
    let mut state = LearnerState::new(w);
    let mut metrics = Vec::with_capacity(setup.rounds as usize);

    for round in 0..setup.rounds {
        let gradients: Vec<Vec<f64>> = (0..k)
            .map(|dev| {
                let mut rng =
                    setup
                        .streams
                        .stream(setup.trial, round, STREAM_DEVICE_BASE + dev as u32);
                local_gradient(
                    &setup.learner,
                    &state,
                    setup.dataset,
                    setup.partition.indices(dev),
                    setup.batch_size,
                    setup.local_epochs,
                    setup.eta,
                    &mut rng,
                )
            })
            .collect();

        let inv = 1.0 / k as f64;
        let ideal: Vec<f64> = (0..state.w.len())
            .map(|i| gradients.iter().map(|g| g[i]).sum::<f64>() * inv)
            .collect();

        let mut channel_rng = setup.streams.stream(setup.trial, round, STREAM_CHANNEL);
        let g_hat = aggregate(
            &gradients,
            setup.mode,
            &setup.system,
            &setup.quantizer,
            &setup.scaling,
            &mut channel_rng,
        );

        let grad_mse = ideal
            .iter()
            .zip(&g_hat)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>();
        let grad_norm2 = ideal.iter().map(|v| v * v).sum::<f64>();

        for (wv, gv) in state.w.iter_mut().zip(&g_hat) {
            *wv -= setup.eta * gv;
        }
        state.round = round + 1;

        let (train_loss, _) = evaluate(
            &setup.learner,
            &state.w,
            setup.dataset.train_features(),
            setup.dataset.train_labels(),
        );
        let (_, test_accuracy) = evaluate(
            &setup.learner,
            &state.w,
            setup.dataset.test_features(),
            setup.dataset.test_labels(),
        );
        metrics.push(RoundMetrics {
            round,
            train_loss,
            test_accuracy,
            grad_mse,
            grad_norm2,
        });
    }

    (state, metrics)
}

// ------------------------------------------------------------------ tests
