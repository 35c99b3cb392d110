//! Datasets and device partitions.
//!
//! A [`Dataset`] holds a train/test split of real feature vectors with
//! integer class labels. [`make_synthetic_dataset`] builds the desk-scale
//! Gaussian-cluster benchmark; [`partition`] deals the training set to
//! devices either iid or with label skew. Every shard has the same size —
//! the digital aggregation path requires equal per-device datasets, so
//! the partitioner refuses sizes it cannot deal evenly.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

// ----------------------------------------------------------------- dataset

/// A train/test split of labeled feature vectors, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    feature_dim: usize,
    class_count: usize,
    train_features: Vec<f64>,
    train_labels: Vec<u32>,
    test_features: Vec<f64>,
    test_labels: Vec<u32>,
}

impl Dataset {
    /// Assembles a dataset from raw parts, checking the shapes. A
    /// `feature_dim` of zero is allowed and gives a label-only dataset,
    /// which is what bias-only learners train on.
    ///
    /// # Panics
    ///
    /// Panics if a feature buffer length is not `labels * feature_dim` or
    /// if a label reaches `class_count`.
    pub fn from_parts(
        feature_dim: usize,
        class_count: usize,
        train_features: Vec<f64>,
        train_labels: Vec<u32>,
        test_features: Vec<f64>,
        test_labels: Vec<u32>,
    ) -> Self {
        assert!(class_count >= 1, "class count must be at least 1");
        for (name, features, labels) in [
            ("train", &train_features, &train_labels),
            ("test", &test_features, &test_labels),
        ] {
            assert!(
                features.len() == labels.len() * feature_dim,
                "{} features hold {} values, expected {} samples x {} dims",
                name,
                features.len(),
                labels.len(),
                feature_dim
            );
            assert!(
                features.iter().all(|v| v.is_finite()),
                "{} features must be finite",
                name
            );
            for &label in labels.iter() {
                assert!(
                    (label as usize) < class_count,
                    "{} label {} is outside the {}-class range",
                    name,
                    label,
                    class_count
                );
            }
        }
        Self {
            feature_dim,
            class_count,
            train_features,
            train_labels,
            test_features,
            test_labels,
        }
    }

    /// Feature dimension of every sample.
    pub fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    /// Number of distinct class labels.
    pub fn class_count(&self) -> usize {
        self.class_count
    }

    /// Number of training samples.
    pub fn train_len(&self) -> usize {
        self.train_labels.len()
    }

    /// Number of test samples.
    pub fn test_len(&self) -> usize {
        self.test_labels.len()
    }

    /// Training features, row-major.
    pub fn train_features(&self) -> &[f64] {
        &self.train_features
    }

    /// Training labels.
    pub fn train_labels(&self) -> &[u32] {
        &self.train_labels
    }

    /// Test features, row-major.
    pub fn test_features(&self) -> &[f64] {
        &self.test_features
    }

    /// Test labels.
    pub fn test_labels(&self) -> &[u32] {
        &self.test_labels
    }

    /// One training sample as a feature slice and its label.
    pub fn train_sample(&self, index: usize) -> (&[f64], u32) {
        let start = index * self.feature_dim;
        (
            &self.train_features[start..start + self.feature_dim],
            self.train_labels[index],
        )
    }
}

/// Builds the synthetic Gaussian-cluster benchmark: `classes` isotropic
/// unit-variance clusters in `feature_dim` dimensions, the mean of class
/// `c` sitting at `separation` along coordinate axis `c`. Four fifths of
/// each class (rounded down) go to the training split, the remainder to
/// the test split, in draw order — so the same seed always rebuilds the
/// identical dataset bit for bit.
///
/// # Panics
///
/// Panics if any count is zero, if `feature_dim < classes` (each class
/// mean needs its own axis), or if `separation` is negative.
pub fn make_synthetic_dataset(
    classes: u32,
    feature_dim: u32,
    samples_per_class: u32,
    separation: f64,
    rng: &mut impl Rng,
) -> Dataset {
    assert!(classes >= 1, "class count must be at least 1");
    assert!(feature_dim >= 1, "feature dimension must be at least 1");
    assert!(
        feature_dim >= classes,
        "feature dimension {} cannot place {} class means on distinct axes",
        feature_dim,
        classes
    );
    assert!(samples_per_class >= 1, "samples per class must be at least 1");
    assert!(
        separation.is_finite() && separation >= 0.0,
        "separation must be nonnegative, got {}",
        separation
    );

    let dim = feature_dim as usize;
    let train_per_class = (samples_per_class as usize) * 4 / 5;
    let mut train_features = Vec::with_capacity(classes as usize * train_per_class * dim);
    let mut train_labels = Vec::new();
    let mut test_features = Vec::new();
    let mut test_labels = Vec::new();

    for class in 0..classes {
        for sample in 0..samples_per_class as usize {
            let (features, labels) = if sample < train_per_class {
                (&mut train_features, &mut train_labels)
            } else {
                (&mut test_features, &mut test_labels)
            };
            for d in 0..dim {
                let noise: f64 = rng.sample(StandardNormal);
                let mean = if d == class as usize { separation } else { 0.0 };
                features.push(mean + noise);
            }
            labels.push(class);
        }
    }

    Dataset::from_parts(
        dim,
        classes as usize,
        train_features,
        train_labels,
        test_features,
        test_labels,
    )
}

// --------------------------------------------------------------- partition

/// How training samples are dealt to devices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionMode {
    /// Shuffle the whole training set and split it evenly.
    Iid,
    /// Sort by label, cut into `devices * shards_per_device` contiguous
    /// shards, and deal each device `shards_per_device` shards at random —
    /// so each device sees only a few distinct labels.
    LabelSkew {
        /// Shards dealt to each device.
        shards_per_device: u32,
    },
}

/// Disjoint equal-size index sets assigning training samples to devices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataPartition {
    device_sets: Vec<Vec<usize>>,
    mode: PartitionMode,
}

impl DataPartition {
    /// Number of devices.
    pub fn device_count(&self) -> usize {
        self.device_sets.len()
    }

    /// Training-set indices held by one device.
    pub fn indices(&self, device: usize) -> &[usize] {
        &self.device_sets[device]
    }

    /// Samples per device (equal across devices by construction).
    pub fn shard_size(&self) -> usize {
        self.device_sets[0].len()
    }

    /// The mode this partition was built with.
    pub fn mode(&self) -> PartitionMode {
        self.mode
    }
}

/// Deals the training set of `dataset` to `k` devices.
///
/// Both modes produce disjoint shards of exactly `train_len / k` samples
/// whose union is the whole training set. The draw order from `rng` is
/// fixed (one shuffle), so a seeded generator reproduces the partition.
///
/// # Panics
///
/// Panics if the training size is not divisible by `k` (label-skew
/// additionally requires divisibility by `k * shards_per_device`), or if
/// a count is zero.
pub fn partition(
    dataset: &Dataset,
    k: u32,
    mode: PartitionMode,
    rng: &mut impl Rng,
) -> DataPartition {
    assert!(k >= 1, "device count must be at least 1");
    let total = dataset.train_len();
    assert!(
        total.is_multiple_of(k as usize),
        "training set size {} is not divisible by the device count {}",
        total,
        k
    );
    let per_device = total / k as usize;

    let device_sets = match mode {
        PartitionMode::Iid => {
            let mut order: Vec<usize> = (0..total).collect();
            order.shuffle(rng);
            order.chunks(per_device).map(<[usize]>::to_vec).collect()
        }
        PartitionMode::LabelSkew { shards_per_device } => {
            assert!(shards_per_device >= 1, "shards per device must be at least 1");
            let shard_count = k as usize * shards_per_device as usize;
            assert!(
                total.is_multiple_of(shard_count),
                "training set size {} is not divisible into {} shards ({} devices x {} shards each)",
                total,
                shard_count,
                k,
                shards_per_device
            );
            let shard_size = total / shard_count;
            // Stable sort by label keeps equal-label samples in index order.
            let mut order: Vec<usize> = (0..total).collect();
            order.sort_by_key(|&i| dataset.train_labels()[i]);
            let mut shards: Vec<&[usize]> = order.chunks(shard_size).collect();
            shards.shuffle(rng);
            shards
                .chunks(shards_per_device as usize)
                .map(|group| group.iter().flat_map(|s| s.iter().copied()).collect())
                .collect()
        }
    };

    DataPartition { device_sets, mode }
}

// ------------------------------------------------------------------ tests
