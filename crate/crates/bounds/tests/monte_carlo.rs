//! Monte Carlo agreement checks for the closed-form decision moments.
//!
//! The simulated decision channel is the one the aggregation pipeline
//! exercises: a uniform symbol on the amplitude lattice `0 .. 2^b - 1`,
//! Gaussian per-dimension noise of deviation `sigma_z / sqrt(2 n_r)`, and
//! a nearest-level snap clamped to the lattice. The closed-form moment
//! must land within three standard errors of the empirical one, and the
//! analytic envelope must sit above both.

use oac_bounds::{symbol_error_moment, symbol_error_moment_bound};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Empirical squared decision error and its standard error over `draws`
/// rounds of the clamped lattice channel.
fn empirical_moment(q: u32, sigma_z: f64, n_r: u32, draws: u64, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let side = 1u64 << (q.trailing_zeros() / 2);
    let sigma_eff = sigma_z / (2.0 * n_r as f64).sqrt();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..draws {
        let symbol = rng.random_range(0..side) as f64;
        let noise: f64 = rng.sample(StandardNormal);
        let observed = symbol + sigma_eff * noise;
        let snapped = (observed + 0.5).floor().clamp(0.0, (side - 1) as f64);
        let err = snapped - symbol;
        let sq = err * err;
        sum += sq;
        sum_sq += sq * sq;
    }
    let n = draws as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    (mean, (var / n).sqrt())
}

#[test]
fn closed_form_moment_matches_simulation_within_three_standard_errors() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB0_0B5);
    let draws = 200_000;
    for q in [4u32, 16, 64] {
        for (sigma_z, n_r) in [(0.2, 1u32), (0.6, 2), (0.6, 1)] {
            let (mean, se) = empirical_moment(q, sigma_z, n_r, draws, &mut rng);
            let formula = symbol_error_moment(q, sigma_z, n_r);
            assert!(
                (mean - formula).abs() <= 3.0 * se.max(1e-9),
                "q={} sigma_z={} n_r={}: empirical {} vs formula {} (se {})",
                q,
                sigma_z,
                n_r,
                mean,
                formula,
                se
            );
        }
    }
}

#[test]
fn envelope_dominates_the_simulation_at_every_operating_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let draws = 100_000;
    for q in [4u32, 16, 64, 256] {
        for (sigma_z, n_r) in [(0.2, 1u32), (0.6, 1), (1.5, 1), (0.9, 4), (4.0, 1)] {
            let (mean, se) = empirical_moment(q, sigma_z, n_r, draws, &mut rng);
            let envelope = symbol_error_moment_bound(sigma_z, n_r);
            assert!(
                envelope >= mean - 3.0 * se,
                "q={} sigma_z={} n_r={}: envelope {} below empirical {}",
                q,
                sigma_z,
                n_r,
                envelope,
                mean
            );
        }
    }
}

#[test]
fn heavy_noise_clamped_error_saturates_at_the_lattice_corners() {
    // When the noise dwarfs the lattice the clamp pins nearly every
    // decision to an end level, so the squared error saturates at the
    // average corner distance: for levels {0..3} that is
    // mean_s (s^2 + (3-s)^2) / 2 = 3.5. The tapered closed form instead
    // decays there (its interior differences vanish) — which is exactly
    // why bound curves use the envelope, and the envelope must still
    // dominate the clamped channel even in this regime.
    let q = 16u32;
    let mut rng = ChaCha8Rng::seed_from_u64(0xCAFE);
    let (mean, se) = empirical_moment(q, 40.0, 1, 200_000, &mut rng);
    assert!(
        (mean - 3.5).abs() <= 3.0 * se + 0.2,
        "clamped heavy-noise moment {} strayed from corner saturation",
        mean
    );
    assert!(symbol_error_moment(q, 40.0, 1) < mean);
    assert!(symbol_error_moment_bound(40.0, 1) >= mean);
}
