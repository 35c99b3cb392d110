//! Federated edge training over a shared wireless uplink.
//!
//! The crate wires the codec, power-control, and channel crates into a
//! complete training loop:
//!
//! - synthetic Gaussian-cluster datasets and an IDX-format reader,
//! - iid and label-skew data partitioning across devices,
//! - desk-scale learners (linear regression, softmax regression, a
//!   one-hidden-layer MLP) with analytic gradients,
//! - gradient aggregation through an ideal, reduced-noise digital,
//!   fading digital, or fading analog uplink,
//! - a seeded round loop emitting per-round metrics.
//!
//! Randomness is injected through the [`StreamSource`] trait so a harness
//! can derive collision-free substreams per trial, round, and purpose;
//! [`MixStreams`] is a lightweight implementation for tests and examples.
//!
//! # Example
//!
//! ```
//! use oac_airchannel::{ChannelDist, SystemConfig};
//! use oac_codec::QuantizerSpec;
//! use oac_fel::{
//!     aggregate, make_synthetic_dataset, partition, AggregateMode, PartitionMode,
//! };
//! use oac_powerctl::PowerScaling;
//! use rand::SeedableRng;
//! use rand_chacha::ChaCha8Rng;
//!
//! let mut rng = ChaCha8Rng::seed_from_u64(7);
//! let data = make_synthetic_dataset(2, 4, 50, 6.0, &mut rng);
//! let parts = partition(&data, 4, PartitionMode::Iid, &mut rng);
//! assert_eq!(parts.device_count(), 4);
//!
//! // A noiseless digital uplink reproduces the quantized average exactly.
//! let cfg = SystemConfig::new(3, 5, 1, 64, 1.0, 0.0, 1e6, ChannelDist::ComplexGaussian);
//! let quant = QuantizerSpec::new(64, 4.0);
//! let scaling = PowerScaling::neutral(3);
//! let grads = vec![vec![0.5; 5], vec![-1.0; 5], vec![2.0; 5]];
//! let agg = aggregate(&grads, AggregateMode::Awgn, &cfg, &quant, &scaling, &mut rng);
//! assert_eq!(agg.len(), 5);
//! ```

mod aggregate_impl;
mod data;
mod idx;
mod learner;
mod train_loop;

pub use aggregate_impl::{aggregate, AggregateMode};
pub use data::{make_synthetic_dataset, partition, DataPartition, Dataset, PartitionMode};
pub use idx::{dataset_from_idx, read_idx_images, read_idx_labels, IdxError};
pub use learner::{
    evaluate, local_gradient, shard_gradient, shard_loss, LearnerFamily, LearnerSpec,
    LearnerState, Loss,
};
pub use train_loop::{
    train, MixStreams, RoundMetrics, StreamSource, TrainSetup, STREAM_CHANNEL,
    STREAM_DEVICE_BASE, STREAM_INIT,
};
