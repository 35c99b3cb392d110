//! Gradient aggregation through the uplink.
//!
//! Four modes share one entry point: an ideal (error-free) average, the
//! digital pipeline over the reduced-noise channel, the digital pipeline
//! over the blind fading channel, and an analog amplitude baseline over
//! the fading channel. The digital pipeline per entry is
//! quantize -> encode -> power preprocess -> channel -> power postprocess
//! -> rescale to the sum lattice -> lattice-decode -> dequantize.
//!
//! Entries map to sequential channel uses, so gradient vectors of any
//! length travel the same way — `SystemConfig::n` is the frame length the
//! power budget was provisioned for, not a hard cap here.

use num_complex::Complex64;
use oac_airchannel::{apply_mac, combine, sample_channel, sum_beamformer, transmit_awgn, SystemConfig};
use oac_codec::{decode_avg, encode, QuantizerSpec};
use oac_powerctl::{postprocess, preprocess, PowerScaling};
use rand::Rng;

/// Which uplink carries the gradients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggregateMode {
    /// Error-free arithmetic mean `(1/K) sum_k g_k`.
    Ideal,
    /// Digital pipeline over the reduced-noise channel (noisy sum, no
    /// fading).
    Awgn,
    /// Digital pipeline over the blind fading channel with sum-channel
    /// combining.
    Fading,
    /// Analog amplitude transmission (clipped, unquantized) over the
    /// blind fading channel.
    AnalogFading,
}

/// Aggregates per-device gradients into the server's estimate.
///
/// The ideal mode consumes no randomness; the channel modes draw from
/// `rng` entry-by-entry in a fixed order, so a seeded generator makes the
/// whole call reproducible.
///
/// # Panics
///
/// Panics when the gradient count disagrees with `cfg.k`, the vectors are
/// ragged, the scaling covers a different device count, or — for the
/// digital modes — the quantizer order differs from the system's or the
/// per-device dataset sizes are unequal.
pub fn aggregate(
    gradients: &[Vec<f64>],
    mode: AggregateMode,
    cfg: &SystemConfig,
    quant: &QuantizerSpec,
    scaling: &PowerScaling,
    rng: &mut impl Rng,
) -> Vec<f64> {
    let k = cfg.k as usize;
    assert!(
        gradients.len() == k,
        "gradient count {} does not match the device count {}",
        gradients.len(),
        k
    );
    let n = gradients[0].len();
    for (dev, g) in gradients.iter().enumerate() {
        assert!(
            g.len() == n,
            "device {} supplies {} entries, expected {}",
            dev,
            g.len(),
            n
        );
    }
    assert!(
        scaling.dataset_sizes().len() == k,
        "power scaling covers {} devices, expected {}",
        scaling.dataset_sizes().len(),
        k
    );

    match mode {
        AggregateMode::Ideal => {
            let inv = 1.0 / k as f64;
            (0..n)
                .map(|i| gradients.iter().map(|g| g[i]).sum::<f64>() * inv)
                .collect()
        }
        AggregateMode::Awgn | AggregateMode::Fading => {
            assert!(
                quant.q() == cfg.q,
                "quantizer order {} differs from the system modulation order {}",
                quant.q(),
                cfg.q
            );
            assert!(
                scaling.sizes_all_equal(),
                "digital aggregation requires equal per-device dataset sizes"
            );
            let tx = transmit_frames(gradients, scaling, |g| {
                encode(quant.quantize(g), cfg.q).as_complex()
            });
            let s_hat = carry_over_channel(&tx, mode, cfg, rng);
            let received = postprocess(&s_hat, scaling);
            received
                .iter()
                .map(|&r| quant.dequantize(decode_avg(r * k as f64, cfg.k, cfg.q)))
                .collect()
        }
        AggregateMode::AnalogFading => {
            let clip = quant.delta_g();
            let tx = transmit_frames(gradients, scaling, |g| {
                Complex64::new(g.clamp(-clip, clip), 0.0)
            });
            let s_hat = carry_over_channel(&tx, mode, cfg, rng);
            postprocess(&s_hat, scaling).iter().map(|r| r.re).collect()
        }
    }
}

/// Maps every device's gradient to power-scaled channel symbols.
fn transmit_frames(
    gradients: &[Vec<f64>],
    scaling: &PowerScaling,
    to_symbol: impl Fn(f64) -> Complex64,
) -> Vec<Vec<Complex64>> {
    gradients
        .iter()
        .enumerate()
        .map(|(dev, g)| {
            let frame: Vec<Complex64> = g.iter().map(|&v| to_symbol(v)).collect();
            preprocess(&frame, scaling.dataset_sizes()[dev], scaling)
        })
        .collect()
}

/// Sends one symbol column per entry and returns the received sum
/// estimates, drawing channel randomness entry-by-entry in index order.
fn carry_over_channel(
    tx: &[Vec<Complex64>],
    mode: AggregateMode,
    cfg: &SystemConfig,
    rng: &mut impl Rng,
) -> Vec<Complex64> {
    let n = tx[0].len();
    let mut column = vec![Complex64::new(0.0, 0.0); tx.len()];
    let mut s_hat = Vec::with_capacity(n);
    for i in 0..n {
        for (slot, frame) in column.iter_mut().zip(tx) {
            *slot = frame[i];
        }
        let estimate = match mode {
            AggregateMode::Awgn => transmit_awgn(&column, cfg, rng),
            AggregateMode::Fading | AggregateMode::AnalogFading => {
                let ch = sample_channel(cfg, rng);
                let y = apply_mac(&column, &ch);
                let u = sum_beamformer(&ch, cfg);
                combine(&u, &y)
            }
            AggregateMode::Ideal => unreachable!("ideal mode never touches the channel"),
        };
        s_hat.push(estimate);
    }
    s_hat
}

// ------------------------------------------------------------------ tests
