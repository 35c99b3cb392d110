//! Transmit power scaling and receive denormalization.
//!
//! Wraps the over-the-air channel with the scaling pair that makes the
//! analog sum meaningful under a per-device power budget:
//!
//! - **[`select_beta`]** picks the normalization factor `beta` from the
//!   worst-case energy of an encoded frame, so that every realizable
//!   transmission deterministically satisfies the power constraint.
//! - **[`preprocess`]** scales a device's frame to `|D_k| * x / sqrt(beta)`
//!   before transmission; **[`postprocess`]** undoes the normalization at
//!   the receiver, `sqrt(beta) * s_hat / sum_k |D_k|`, so a noiseless sum
//!   channel returns the dataset-weighted average of the inputs.
//! - **[`power_check`]** verifies a frame against the budget.
//!
//! With equal dataset sizes the pair is exactly lattice-neutral: scaling
//! down, summing, and denormalizing lands back on the integer sum lattice
//! the digital decoder snaps to, so power control never perturbs decoding.
//!
//! # Example
//!
//! ```
//! use num_complex::Complex64;
//! use oac_airchannel::{ChannelDist, SystemConfig};
//! use oac_powerctl::{postprocess, preprocess, select_beta};
//!
//! // Three devices, equal data, one subchannel, noiseless sum channel.
//! let cfg = SystemConfig::new(3, 1, 1, 4, 1.0, 1.0, 1.0, ChannelDist::ComplexGaussian);
//! let scaling = select_beta(&[10, 10, 10], &cfg, 1.1);
//! let frames = [
//!     [Complex64::new(0.5, 0.5)],
//!     [Complex64::new(-0.5, 0.5)],
//!     [Complex64::new(0.5, -0.5)],
//! ];
//! let sum: Complex64 = frames
//!     .iter()
//!     .map(|x| preprocess(x, 10, &scaling)[0])
//!     .sum();
//! let r = postprocess(&[sum], &scaling)[0];
//! // Equal sizes: the result is the plain average of the three inputs.
//! let avg = (frames[0][0] + frames[1][0] + frames[2][0]) / 3.0;
//! assert!((r - avg).norm() <= 1e-12);
//! ```

use num_complex::Complex64;
use oac_airchannel::SystemConfig;

// ------------------------------------------------------------ scaling type

/// The transmit/receive scaling pair: the power normalization factor and
/// the dataset sizes it was derived for.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerScaling {
    beta: f64,
    dataset_sizes: Vec<u64>,
}

impl PowerScaling {
    /// Builds a scaling from an explicit factor and size list.
    ///
    /// # Panics
    ///
    /// Panics if `beta` is not strictly positive and finite, the size list
    /// is empty, or any size is zero.
    pub fn new(beta: f64, dataset_sizes: Vec<u64>) -> Self {
        assert!(
            beta.is_finite() && beta > 0.0,
            "beta must be positive, got {}",
            beta
        );
        assert!(!dataset_sizes.is_empty(), "dataset size list is empty");
        assert!(
            dataset_sizes.iter().all(|&d| d >= 1),
            "every dataset size must be at least 1"
        );
        Self {
            beta,
            dataset_sizes,
        }
    }

    /// The neutral scaling: `beta = 1` and `k` unit-size datasets, so
    /// preprocessing is the identity and postprocessing divides by `k`.
    /// Experiments that study the channel in isolation use this.
    pub fn neutral(k: usize) -> Self {
        Self::new(1.0, vec![1; k])
    }

    /// The normalization factor `beta`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The per-device dataset sizes `|D_k|`.
    pub fn dataset_sizes(&self) -> &[u64] {
        &self.dataset_sizes
    }

    /// Sum of all dataset sizes.
    pub fn total_size(&self) -> u64 {
        self.dataset_sizes.iter().sum()
    }

    /// Whether every device holds the same amount of data. The digital
    /// aggregation path requires this; unequal sizes would knock the
    /// denormalized sum off the integer lattice the decoder snaps to.
    pub fn sizes_all_equal(&self) -> bool {
        self.dataset_sizes
            .iter()
            .all(|&d| d == self.dataset_sizes[0])
    }
}

// ------------------------------------------------------------- operations

/// Chooses `beta` from the worst-case encoded-frame energy:
/// `beta = margin * max_k |D_k|^2 * N * (2^b - 1)^2 / 2 / P_max`,
/// where `2^b` is the per-axis constellation side for modulation order `q`.
///
/// Every frame a device can emit then passes [`power_check`]
/// deterministically (no distributional assumption on the data), with
/// `margin` (at least 1) of headroom; `1.1` is the conventional default.
///
/// # Panics
///
/// Panics if the size list is empty, any size is zero, or `margin < 1`.
pub fn select_beta(dataset_sizes: &[u64], cfg: &SystemConfig, margin: f64) -> PowerScaling {
    assert!(!dataset_sizes.is_empty(), "dataset size list is empty");
    assert!(
        margin.is_finite() && margin >= 1.0,
        "margin must be at least 1, got {}",
        margin
    );
    cfg.validate();
    let side = 1u64 << (cfg.q.trailing_zeros() / 2); // 2^b
    let max_d = *dataset_sizes.iter().max().expect("nonempty") as f64;
    let worst_symbol_energy = (side as f64 - 1.0).powi(2) / 2.0;
    // Margin multiplies last so changing it rescales beta exactly.
    let beta = max_d * max_d * cfg.n as f64 * worst_symbol_energy / cfg.p_max * margin;
    PowerScaling::new(beta, dataset_sizes.to_vec())
}

/// Scales one device's frame for transmission: `s = |D_k| * x / sqrt(beta)`.
pub fn preprocess(x: &[Complex64], d_k: u64, scaling: &PowerScaling) -> Vec<Complex64> {
    let gain = d_k as f64 / scaling.beta.sqrt();
    x.iter().map(|&xi| gain * xi).collect()
}

/// Denormalizes the combined receive frame:
/// `r = sqrt(beta) * s_hat / sum_k |D_k|`.
///
/// On a noiseless sum channel this turns the superposition of preprocessed
/// frames into the dataset-weighted average of the device inputs.
pub fn postprocess(s_hat: &[Complex64], scaling: &PowerScaling) -> Vec<Complex64> {
    let gain = scaling.beta.sqrt() / scaling.total_size() as f64;
    s_hat.iter().map(|&si| gain * si).collect()
}

/// Whether the frame respects the per-device power budget:
/// `||frame||^2 <= p_max`, boundary inclusive.
pub fn power_check(frame: &[Complex64], p_max: f64) -> bool {
    frame.iter().map(|s| s.norm_sqr()).sum::<f64>() <= p_max
}

// ------------------------------------------------------------------ tests
