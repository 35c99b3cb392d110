//! Fading multiple-access channel with blind multi-antenna reception.
//!
//! Simulates, for one subchannel at a time:
//!
//! - **Fading MAC**: `K` single-antenna devices transmit simultaneously;
//!   an `N_r`-antenna receiver observes `y = sum_k h_k s_k + z` with
//!   i.i.d. Gaussian fading `h_k` and noise `z`.
//! - **Blind combining**: the receiver knows only the *sum* of the channel
//!   vectors and beamforms with `u = sum_k h_k / (N_r sigma_h^2)`; the
//!   combined output `u^H y` concentrates on the noiseless symbol sum as
//!   `N_r` grows, with no per-device channel knowledge or pre-equalization.
//! - **Reduced-noise abstraction**: an AWGN shortcut `sum_k s_k + z~` with
//!   noise variance `sigma_z^2 / N_r`, the large-`N_r` limit of the fading
//!   path, for experiments that do not need per-draw fading.
//! - **Error decomposition**: the combined output minus the true sum splits
//!   exactly into a signal-fluctuation term, a cross-channel interference
//!   term, and a filtered-noise term — the three quantities the
//!   concentration analysis tracks.
//!
//! Channel coefficients are complex circularly-symmetric by default; a
//! real-Gaussian mode is available behind [`ChannelDist`] for comparison.
//! All randomness comes through caller-supplied streams, so trials are
//! reproducible and safely parallel with disjoint streams.
//!
//! # Example
//!
//! ```
//! use num_complex::Complex64;
//! use oac_airchannel::{
//!     apply_mac, combine, error_decomposition, sample_channel, sum_beamformer,
//!     ChannelDist, SystemConfig,
//! };
//! use rand::SeedableRng;
//!
//! let cfg = SystemConfig::new(3, 1, 64, 4, 1.0, 0.1, 1.0, ChannelDist::ComplexGaussian);
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
//! let symbols = vec![
//!     Complex64::new(0.5, -0.5),
//!     Complex64::new(-0.5, 0.5),
//!     Complex64::new(0.5, 0.5),
//! ];
//!
//! let ch = sample_channel(&cfg, &mut rng);
//! let s_hat = combine(&sum_beamformer(&ch, &cfg), &apply_mac(&symbols, &ch));
//!
//! let parts = error_decomposition(&ch, &symbols, &cfg);
//! let total = s_hat - symbols.iter().sum::<Complex64>();
//! assert!((parts.total() - total).norm() <= 1e-9 * total.norm().max(1.0));
//! ```

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

// ---------------------------------------------------------- configuration

/// Distribution family for the fading coefficients (and the matching
/// antenna noise) drawn by [`sample_channel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelDist {
    /// Circularly-symmetric complex Gaussian: per-entry variance
    /// `sigma^2`, split evenly across real and imaginary parts.
    ComplexGaussian,
    /// Real Gaussian with variance `sigma^2`; imaginary parts are zero.
    RealGaussian,
}

/// Network and channel parameters shared by every module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    /// Number of transmitting devices `K`.
    pub k: u32,
    /// Number of subchannels / model parameters `N`.
    pub n: u32,
    /// Number of receive antennas `N_r`.
    pub n_r: u32,
    /// Modulation order `q` (power of four).
    pub q: u32,
    /// Fading coefficient variance `sigma_h^2`.
    pub sigma_h2: f64,
    /// Noise variance `sigma_z^2`.
    pub sigma_z2: f64,
    /// Per-device average power budget `P_max`.
    pub p_max: f64,
    /// Fading distribution family.
    pub channel_dist: ChannelDist,
}

impl SystemConfig {
    /// Builds a validated configuration.
    ///
    /// # Panics
    ///
    /// Panics if any count is zero, any variance is not strictly positive,
    /// the power budget is not strictly positive, or `q` is not a power of
    /// four.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        k: u32,
        n: u32,
        n_r: u32,
        q: u32,
        sigma_h2: f64,
        sigma_z2: f64,
        p_max: f64,
        channel_dist: ChannelDist,
    ) -> Self {
        let cfg = Self {
            k,
            n,
            n_r,
            q,
            sigma_h2,
            sigma_z2,
            p_max,
            channel_dist,
        };
        cfg.validate();
        cfg
    }

    /// Checks every invariant; see [`SystemConfig::new`].
    ///
    /// # Panics
    ///
    /// Panics with the violated constraint.
    pub fn validate(&self) {
        assert!(self.k >= 1, "device count K must be at least 1");
        assert!(self.n >= 1, "subchannel count N must be at least 1");
        assert!(self.n_r >= 1, "antenna count N_r must be at least 1");
        assert!(
            self.q >= 4 && self.q.is_power_of_two() && self.q.trailing_zeros().is_multiple_of(2),
            "q must be a power of 4, got {}",
            self.q
        );
        assert!(
            self.sigma_h2.is_finite() && self.sigma_h2 > 0.0,
            "sigma_h2 must be positive, got {}",
            self.sigma_h2
        );
        assert!(
            self.sigma_z2.is_finite() && self.sigma_z2 >= 0.0,
            "sigma_z2 must be nonnegative, got {}",
            self.sigma_z2
        );
        assert!(
            self.p_max.is_finite() && self.p_max > 0.0,
            "p_max must be positive, got {}",
            self.p_max
        );
    }
}

// ----------------------------------------------------------- realization

/// One subchannel's fading draw: a `K x N_r` coefficient matrix plus a
/// length-`N_r` antenna noise vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    h: Vec<Complex64>,
    z: Vec<Complex64>,
    k: u32,
    n_r: u32,
}

impl ChannelRealization {
    /// Device count `K`.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Antenna count `N_r`.
    pub fn n_r(&self) -> u32 {
        self.n_r
    }

    /// Device `k`'s channel vector (length `N_r`).
    ///
    /// # Panics
    ///
    /// Panics if `device >= K`.
    pub fn h_device(&self, device: u32) -> &[Complex64] {
        assert!(device < self.k, "device {} out of range", device);
        let n_r = self.n_r as usize;
        &self.h[device as usize * n_r..(device as usize + 1) * n_r]
    }

    /// The antenna noise vector (length `N_r`).
    pub fn noise(&self) -> &[Complex64] {
        &self.z
    }
}

fn draw(dist: ChannelDist, variance: f64, rng: &mut impl Rng) -> Complex64 {
    match dist {
        ChannelDist::ComplexGaussian => {
            let s = (variance / 2.0).sqrt();
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(s * re, s * im)
        }
        ChannelDist::RealGaussian => {
            let re: f64 = rng.sample(StandardNormal);
            Complex64::new(variance.sqrt() * re, 0.0)
        }
    }
}

// ------------------------------------------------------------- operations

/// Draws one subchannel realization: i.i.d. coefficients for every
/// device/antenna pair (variance `sigma_h^2`) and i.i.d. antenna noise
/// (variance `sigma_z^2`), both per [`ChannelDist`].
///
/// Draw order is fixed (devices outer, antennas inner, coefficients before
/// noise) so a given stream always yields the same realization.
pub fn sample_channel(cfg: &SystemConfig, rng: &mut impl Rng) -> ChannelRealization {
    cfg.validate();
    let mut h = Vec::with_capacity(cfg.k as usize * cfg.n_r as usize);
    for _ in 0..cfg.k {
        for _ in 0..cfg.n_r {
            h.push(draw(cfg.channel_dist, cfg.sigma_h2, rng));
        }
    }
    let z = (0..cfg.n_r)
        .map(|_| draw(cfg.channel_dist, cfg.sigma_z2, rng))
        .collect();
    ChannelRealization {
        h,
        z,
        k: cfg.k,
        n_r: cfg.n_r,
    }
}

/// Superposes the `K` transmitted symbols through the fading MAC:
/// `y_i = sum_k h_{k,i} s_k + z_i` for each antenna `i`.
///
/// # Panics
///
/// Panics if `symbols.len() != K`.
pub fn apply_mac(symbols: &[Complex64], ch: &ChannelRealization) -> Vec<Complex64> {
    assert_eq!(
        symbols.len(),
        ch.k as usize,
        "symbol count {} does not match device count {}",
        symbols.len(),
        ch.k
    );
    let n_r = ch.n_r as usize;
    let mut y = ch.z.clone();
    for (device, &s) in symbols.iter().enumerate() {
        let row = &ch.h[device * n_r..(device + 1) * n_r];
        for (acc, &coeff) in y.iter_mut().zip(row) {
            *acc += coeff * s;
        }
    }
    y
}

/// The blind sum-of-channels beamformer `u = (sum_k h_k) / (N_r sigma_h^2)`.
///
/// Only the aggregate channel enters, so the receiver needs no per-device
/// estimates.
pub fn sum_beamformer(ch: &ChannelRealization, cfg: &SystemConfig) -> Vec<Complex64> {
    let n_r = ch.n_r as usize;
    let scale = 1.0 / (cfg.n_r as f64 * cfg.sigma_h2);
    let mut u = vec![Complex64::new(0.0, 0.0); n_r];
    for device in 0..ch.k as usize {
        let row = &ch.h[device * n_r..(device + 1) * n_r];
        for (acc, &coeff) in u.iter_mut().zip(row) {
            *acc += coeff * scale;
        }
    }
    u
}

/// Combines the received vector with the beamformer: `s_hat = u^H y`
/// (the conjugate is applied to the beamformer, leaving the data
/// unconjugated in the diagonal signal terms).
///
/// # Panics
///
/// Panics if the lengths differ.
pub fn combine(u: &[Complex64], y: &[Complex64]) -> Complex64 {
    assert_eq!(u.len(), y.len(), "beamformer/received length mismatch");
    u.iter().zip(y).map(|(&ui, &yi)| ui.conj() * yi).sum()
}

/// The reduced-noise AWGN abstraction of the digital path:
/// `s_hat = sum_k s_k + z~` with `z~` circularly symmetric of total
/// variance `sigma_z^2 / N_r`.
///
/// This is the `N_r -> infinity` limit of the fading pipeline; it is
/// always complex regardless of [`ChannelDist`].
pub fn transmit_awgn(symbols: &[Complex64], cfg: &SystemConfig, rng: &mut impl Rng) -> Complex64 {
    cfg.validate();
    let per_dim = (cfg.sigma_z2 / (2.0 * cfg.n_r as f64)).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    symbols.iter().sum::<Complex64>() + Complex64::new(per_dim * re, per_dim * im)
}

// ------------------------------------------------------- error breakdown

/// The three-term split of the combining error `s_hat - sum_k s_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorDecomposition {
    /// Signal fluctuation: `sum_k (||h_k||^2 / (sigma_h^2 N_r) - 1) s_k`.
    pub e_sig: Complex64,
    /// Cross-channel interference:
    /// `sum_{k != k'} <h_k, h_k'> s_k' / (N_r sigma_h^2)`.
    pub e_int: Complex64,
    /// Filtered noise: `sum_k <h_k, z> / (sigma_h^2 N_r)`.
    pub e_noise: Complex64,
}

impl ErrorDecomposition {
    /// Sum of the three terms; equals the total combining error exactly
    /// (up to floating round-off).
    pub fn total(&self) -> Complex64 {
        self.e_sig + self.e_int + self.e_noise
    }
}

/// Splits the combining error into signal, interference, and noise terms,
/// using the same conjugation convention as [`combine`] so the three terms
/// sum to `combine(u, y) - sum_k s_k` exactly.
///
/// # Panics
///
/// Panics if `symbols.len() != K`.
pub fn error_decomposition(
    ch: &ChannelRealization,
    symbols: &[Complex64],
    cfg: &SystemConfig,
) -> ErrorDecomposition {
    assert_eq!(
        symbols.len(),
        ch.k as usize,
        "symbol count {} does not match device count {}",
        symbols.len(),
        ch.k
    );
    let n_r = ch.n_r as usize;
    let norm = 1.0 / (cfg.sigma_h2 * cfg.n_r as f64);

    let mut e_sig = Complex64::new(0.0, 0.0);
    let mut e_int = Complex64::new(0.0, 0.0);
    let mut e_noise = Complex64::new(0.0, 0.0);

    for a in 0..ch.k as usize {
        let row_a = &ch.h[a * n_r..(a + 1) * n_r];

        let gain: f64 = row_a.iter().map(|c| c.norm_sqr()).sum();
        e_sig += (gain * norm - 1.0) * symbols[a];

        let noise_dot: Complex64 = row_a.iter().zip(&ch.z).map(|(&h, &z)| h.conj() * z).sum();
        e_noise += noise_dot * norm;

        for (b, &s_b) in symbols.iter().enumerate() {
            if a == b {
                continue;
            }
            let row_b = &ch.h[b * n_r..(b + 1) * n_r];
            let cross: Complex64 = row_a.iter().zip(row_b).map(|(&ha, &hb)| ha.conj() * hb).sum();
            e_int += cross * s_b * norm;
        }
    }

    ErrorDecomposition {
        e_sig,
        e_int,
        e_noise,
    }
}

// ------------------------------------------------------------------ tests
