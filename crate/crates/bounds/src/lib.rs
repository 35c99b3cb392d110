//! Closed-form calculators for the analysis side of blind over-the-air
//! aggregation: symbol-decision error moments, end-to-end MSE bounds for
//! the reduced-noise and fading pipelines, minimum antenna counts for a
//! target accuracy, an SGD convergence bound, and a rate-distortion
//! latency model comparing analog, digital, and orthogonal uplinks.
//!
//! Everything here is deterministic arithmetic — no randomness, no
//! simulation. The simulator crates produce empirical curves; this crate
//! produces the analytical curves they are compared against.
//!
//! # Example
//!
//! ```
//! use oac_bounds::{mse_awgn_bound, AwgnBoundInput};
//!
//! let input = AwgnBoundInput {
//!     n: 100,
//!     k: 50,
//!     q: 64,
//!     delta_g: 32.0,
//!     sigma_z2: 4.0,
//!     n_r: 1,
//! };
//! let mse = mse_awgn_bound(&input);
//! assert!(mse.total >= mse.quantization);
//! assert_eq!(mse.total, mse.channel + mse.quantization);
//! ```

// ------------------------------------------------------------- Q-function

/// Standard normal tail probability `Q(x) = P(Z > x)`, computed through
/// the complementary error function. Absolute error stays below `1e-10`
/// across `[-40, 40]`; the deep tail underflows smoothly through
/// subnormals and reaches zero only past `x = 38`, far below any
/// tolerance this crate works at.
pub fn q_function(x: f64) -> f64 {
    assert!(x.is_finite(), "q_function requires a finite argument");
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

// ------------------------------------------------- symbol error moments

fn check_q(q: u32) {
    assert!(
        q >= 4 && q.is_power_of_two() && q.trailing_zeros().is_multiple_of(2),
        "q must be a power of 4, got {}",
        q
    );
}

/// Per-dimension effective noise deviation for a combined noise variance
/// `sigma_z^2 / n_r` split evenly over the two quadrature dimensions.
fn sigma_eff(sigma_z: f64, n_r: u32) -> f64 {
    sigma_z / (2.0 * n_r as f64).sqrt()
}

/// Second moment of the hard-decision error for one dimension of the
/// `q`-point square constellation: a unit-spaced amplitude lattice with
/// `2^b = sqrt(q)` levels, uniform symbols, and Gaussian noise of
/// per-dimension deviation `sigma_z / sqrt(2 n_r)`.
///
/// `P(|error| = l) = 2 (1 - l/2^b) [Q((2l-1)/(2s)) - Q((2l+1)/(2s))]`,
/// and the returned moment is `sum_l l^2 P_l` over `l = 1 .. 2^b - 1`.
/// Zero noise returns exactly zero.
pub fn symbol_error_moment(q: u32, sigma_z: f64, n_r: u32) -> f64 {
    check_q(q);
    assert!(
        sigma_z.is_finite() && sigma_z >= 0.0,
        "sigma_z must be nonnegative, got {}",
        sigma_z
    );
    assert!(n_r >= 1, "antenna count must be at least 1");
    if sigma_z == 0.0 {
        return 0.0;
    }
    let side = 1u64 << (q.trailing_zeros() / 2); // 2^b
    let s = sigma_eff(sigma_z, n_r);
    let mut moment = 0.0;
    for l in 1..side {
        let lf = l as f64;
        let p = 2.0
            * (1.0 - lf / side as f64)
            * (q_function((2.0 * lf - 1.0) / (2.0 * s)) - q_function((2.0 * lf + 1.0) / (2.0 * s)));
        moment += lf * lf * p;
    }
    moment
}

/// Analytic upper envelope of the hard-decision error second moment for a
/// unit-spaced lattice under Gaussian noise of per-dimension deviation
/// `sigma_z / sqrt(2 n_r)`:
///
/// `sum_{l >= 1} (2l - 1) exp(-(2l - 1)^2 / (8 s^2))`.
///
/// It follows from summing the decision-tail probabilities by parts and
/// replacing each `Q(x)` with `exp(-x^2/2)/2`, so it dominates the true
/// moment for every alphabet size, clamped or not, at every noise level
/// (roughly a factor two above [`symbol_error_moment`] in practice).
/// MSE curves that must provably stay above the simulator use this form.
pub fn symbol_error_moment_bound(sigma_z: f64, n_r: u32) -> f64 {
    assert!(
        sigma_z.is_finite() && sigma_z >= 0.0,
        "sigma_z must be nonnegative, got {}",
        sigma_z
    );
    assert!(n_r >= 1, "antenna count must be at least 1");
    if sigma_z == 0.0 {
        return 0.0;
    }
    let s = sigma_eff(sigma_z, n_r);
    let mut sum = 0.0;
    let mut l = 1u64;
    loop {
        let m = (2 * l - 1) as f64;
        let term = m * (-m * m / (8.0 * s * s)).exp();
        sum += term;
        // The summand rises until m ~ 2s, then decays super-exponentially.
        if m > 2.0 * s && term < sum * 1e-17 {
            break;
        }
        l += 1;
    }
    sum
}

// --------------------------------------------------------- AWGN MSE bound

/// Inputs for the reduced-noise (AWGN) aggregation MSE bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AwgnBoundInput {
    /// Subchannel (model dimension) count `N`.
    pub n: u32,
    /// Device count `K`.
    pub k: u32,
    /// Modulation order `q`.
    pub q: u32,
    /// Quantizer half-range.
    pub delta_g: f64,
    /// Noise variance before antenna reduction.
    pub sigma_z2: f64,
    /// Antenna count dividing the noise variance.
    pub n_r: u32,
}

impl AwgnBoundInput {
    /// Checks every invariant.
    ///
    /// # Panics
    ///
    /// Panics with the violated constraint.
    pub fn validate(&self) {
        assert!(self.n >= 1, "subchannel count N must be at least 1");
        assert!(self.k >= 1, "device count K must be at least 1");
        check_q(self.q);
        assert!(
            self.delta_g.is_finite() && self.delta_g > 0.0,
            "delta_g must be positive, got {}",
            self.delta_g
        );
        assert!(
            self.sigma_z2.is_finite() && self.sigma_z2 >= 0.0,
            "sigma_z2 must be nonnegative, got {}",
            self.sigma_z2
        );
        assert!(self.n_r >= 1, "antenna count N_r must be at least 1");
    }
}

/// An MSE bound split into its channel-induced and quantization parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MseBound {
    /// Channel-induced (decision or fading) error power.
    pub channel: f64,
    /// Quantization error power.
    pub quantization: f64,
    /// Sum of the two parts.
    pub total: f64,
}

/// AWGN aggregation MSE from an explicitly supplied per-dimension decision
/// moment `e_r`:
///
/// - channel part `(2 delta_g / q)^2 * N (1 + q) e_r / K^2` — the decision
///   error on the in-phase dimension weighs `1`, on the quadrature
///   dimension `q`, and the squared dequantizer cell width converts
///   lattice units into gradient units;
/// - quantization part `N delta_g^2 / (3 K q^2)`.
pub fn mse_awgn_from_moment(n: u32, k: u32, q: u32, delta_g: f64, e_r: f64) -> MseBound {
    check_q(q);
    assert!(e_r >= 0.0, "decision moment must be nonnegative");
    let nf = n as f64;
    let kf = k as f64;
    let qf = q as f64;
    let cell = 2.0 * delta_g / qf;
    let channel = cell * cell * nf * (1.0 + qf) * e_r / (kf * kf);
    let quantization = nf * delta_g * delta_g / (3.0 * kf * qf * qf);
    MseBound {
        channel,
        quantization,
        total: channel + quantization,
    }
}

/// End-to-end MSE bound for digital aggregation over the reduced-noise
/// channel, using the dominating envelope [`symbol_error_moment_bound`]
/// for the decision moment so that the result provably upper-bounds the
/// simulated pipeline at every noise level.
pub fn mse_awgn_bound(input: &AwgnBoundInput) -> MseBound {
    input.validate();
    let e = symbol_error_moment_bound(input.sigma_z2.sqrt(), input.n_r);
    mse_awgn_from_moment(input.n, input.k, input.q, input.delta_g, e)
}

// -------------------------------------------------------- fading bounds

/// Inputs for the fading-channel concentration and MSE bounds.
///
/// `gamma` is the worst-case (largest over subchannels) absolute symbol
/// sum `sum_k |s_k|`; the slack constant `c = 1/gamma + sigma_h/sigma_z`
/// is then automatically its smallest value over subchannels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingBoundInput {
    /// Largest per-subchannel absolute symbol sum.
    pub gamma: f64,
    /// Fading standard deviation.
    pub sigma_h: f64,
    /// Noise standard deviation.
    pub sigma_z: f64,
    /// Device count `K`.
    pub k: u32,
    /// Subchannel count `N`.
    pub n: u32,
    /// Modulation order `q`.
    pub q: u32,
    /// Antenna count `N_r`.
    pub n_r: u32,
    /// Target absolute error.
    pub epsilon: f64,
    /// Allowed failure probability.
    pub delta: f64,
}

impl FadingBoundInput {
    /// Checks every invariant.
    ///
    /// # Panics
    ///
    /// Panics with the violated constraint.
    pub fn validate(&self) {
        assert!(
            self.gamma.is_finite() && self.gamma > 0.0,
            "gamma must be positive, got {}",
            self.gamma
        );
        assert!(
            self.sigma_h.is_finite() && self.sigma_h > 0.0,
            "sigma_h must be positive, got {}",
            self.sigma_h
        );
        assert!(
            self.sigma_z.is_finite() && self.sigma_z > 0.0,
            "sigma_z must be positive, got {}",
            self.sigma_z
        );
        assert!(self.k >= 1, "device count K must be at least 1");
        assert!(self.n >= 1, "subchannel count N must be at least 1");
        check_q(self.q);
        assert!(self.n_r >= 1, "antenna count N_r must be at least 1");
        assert!(
            self.epsilon.is_finite() && self.epsilon > 0.0,
            "epsilon must be positive, got {}",
            self.epsilon
        );
        assert!(
            self.delta > 0.0 && self.delta < 1.0,
            "delta must lie in (0, 1), got {}",
            self.delta
        );
    }

    /// The concentration slack constant `c = 1/gamma + sigma_h/sigma_z`.
    pub fn c(&self) -> f64 {
        1.0 / self.gamma + self.sigma_h / self.sigma_z
    }
}

/// Upper bound on the expected absolute combining error of one subchannel
/// under blind fading aggregation:
/// `4 K gamma / (sqrt(N_r) c) * (sqrt(pi) + ln(6K))`.
pub fn expected_abs_error_fading(input: &FadingBoundInput) -> f64 {
    input.validate();
    let kf = input.k as f64;
    4.0 * kf * input.gamma / ((input.n_r as f64).sqrt() * input.c())
        * (std::f64::consts::PI.sqrt() + (6.0 * kf).ln())
}

fn ceil_to_count(x: f64) -> u64 {
    assert!(x.is_finite() && x >= 0.0, "antenna bound must be finite");
    x.ceil().max(1.0) as u64
}

/// Minimum antenna count for one subchannel's combining error to stay
/// within `epsilon` except with probability `delta`:
/// `ceil(8 gamma^2 K^2 ln(6K/delta) / (epsilon^2 c^2))`.
pub fn antenna_bound_symbol(input: &FadingBoundInput) -> u64 {
    input.validate();
    let kf = input.k as f64;
    let c = input.c();
    let raw = 8.0 * input.gamma * input.gamma * kf * kf * (6.0 * kf / input.delta).ln()
        / (input.epsilon * input.epsilon * c * c);
    ceil_to_count(raw)
}

/// Variant of [`antenna_bound_symbol`] carrying an extra noise-to-fading
/// power ratio `sigma_z^2 / sigma_h^2`, the more conservative form that
/// appears when the noise term is not normalized away. Identical to the
/// default when `sigma_z = sigma_h`.
pub fn antenna_bound_symbol_noise_scaled(input: &FadingBoundInput) -> u64 {
    input.validate();
    let kf = input.k as f64;
    let c = input.c();
    let noise_ratio =
        (input.sigma_z * input.sigma_z) / (input.sigma_h * input.sigma_h);
    let raw = 8.0 * input.gamma * input.gamma * kf * kf * (6.0 * kf / input.delta).ln()
        / (input.epsilon * input.epsilon * c * c)
        * noise_ratio;
    ceil_to_count(raw)
}

/// Gradient-MSE bound for blind fading aggregation across all `N`
/// subchannels, with the quantization part as in [`mse_awgn_from_moment`]:
/// channel part `16 N gamma^2 q / (N_r c^2) * (pi + 2 ln(6K)^2)`.
pub fn mse_fading_bound(input: &FadingBoundInput, delta_g: f64) -> MseBound {
    input.validate();
    assert!(
        delta_g.is_finite() && delta_g > 0.0,
        "delta_g must be positive, got {}",
        delta_g
    );
    let nf = input.n as f64;
    let kf = input.k as f64;
    let qf = input.q as f64;
    let c = input.c();
    let ln6k = (6.0 * kf).ln();
    let channel = 16.0 * nf * input.gamma * input.gamma * qf / (input.n_r as f64 * c * c)
        * (std::f64::consts::PI + 2.0 * ln6k * ln6k);
    let quantization = nf * delta_g * delta_g / (3.0 * kf * qf * qf);
    MseBound {
        channel,
        quantization,
        total: channel + quantization,
    }
}

/// Minimum antenna count for the whole-gradient aggregation error to meet
/// the `epsilon` target except with probability `delta`:
/// `ceil(16 gamma^2 N q ln(6K/delta) / (epsilon^2 c^2))`.
pub fn antenna_bound_gradient(input: &FadingBoundInput) -> u64 {
    input.validate();
    let kf = input.k as f64;
    let c = input.c();
    let raw = 16.0 * input.gamma * input.gamma * input.n as f64 * input.q as f64
        * (6.0 * kf / input.delta).ln()
        / (input.epsilon * input.epsilon * c * c);
    ceil_to_count(raw)
}

// ----------------------------------------------------- convergence bound

/// Inputs for the SGD stationarity bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceInput {
    /// Learning rate.
    pub eta: f64,
    /// Smoothness constant of the loss.
    pub l_smooth: f64,
    /// Round count `T`.
    pub t: u32,
    /// Initial optimality gap `L(w_1) - L*`.
    pub loss_gap: f64,
    /// Channel-induced gradient MSE per round.
    pub sigma_ch2: f64,
    /// Quantization-induced gradient MSE per round.
    pub sigma_q2: f64,
    /// Mean gradient-divergence bound across devices.
    pub theta_bar: f64,
}

impl ConvergenceInput {
    /// Checks every invariant.
    ///
    /// # Panics
    ///
    /// Panics with the violated constraint — in particular when
    /// `eta * l_smooth >= 2`, where the bound's denominator loses its sign.
    pub fn validate(&self) {
        assert!(
            self.eta.is_finite() && self.eta > 0.0,
            "eta must be positive, got {}",
            self.eta
        );
        assert!(
            self.l_smooth.is_finite() && self.l_smooth > 0.0,
            "smoothness constant must be positive, got {}",
            self.l_smooth
        );
        assert!(
            self.eta * self.l_smooth < 2.0,
            "eta * L must be below 2, got {}",
            self.eta * self.l_smooth
        );
        assert!(self.t >= 1, "round count T must be at least 1");
        assert!(
            self.loss_gap.is_finite() && self.loss_gap >= 0.0,
            "loss gap must be nonnegative, got {}",
            self.loss_gap
        );
        for (name, v) in [
            ("sigma_ch2", self.sigma_ch2),
            ("sigma_q2", self.sigma_q2),
            ("theta_bar", self.theta_bar),
        ] {
            assert!(v.is_finite() && v >= 0.0, "{} must be nonnegative, got {}", name, v);
        }
    }
}

/// Upper bound on the average squared gradient norm `(1/T) sum ||g||^2`
/// after `T` rounds of perturbed gradient descent:
///
/// `loss_gap / (T eta (1 - eta L / 2))
///  + (eta L / 2) / (1 - eta L / 2) * (sigma_ch^2 + sigma_q^2 + theta_bar)`.
///
/// # Panics
///
/// Panics if `eta * L >= 2` (see [`ConvergenceInput::validate`]).
pub fn convergence_rhs(input: &ConvergenceInput) -> f64 {
    input.validate();
    let half = input.eta * input.l_smooth / 2.0;
    let denom = 1.0 - half;
    input.loss_gap / (input.t as f64 * input.eta * denom)
        + half / denom * (input.sigma_ch2 + input.sigma_q2 + input.theta_bar)
}

// ---------------------------------------------------------- latency model

/// Inputs for the rate-distortion latency comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatencyInput {
    /// Channel bandwidth in hertz.
    pub bandwidth_hz: f64,
    /// Symbol duration in seconds.
    pub symbol_time_s: f64,
    /// Model dimension `N` (symbols to deliver per device or sum).
    pub n: f64,
    /// Device count `K`.
    pub k: u32,
    /// Antenna count `N_r`.
    pub n_r: u32,
    /// Modulation order `q` of the digital scheme.
    pub q: u32,
    /// Noise variance.
    pub sigma_z2: f64,
    /// Fading variance.
    pub sigma_h2: f64,
    /// Second moment `E|s|^2` of the transmitted symbol law.
    pub symbol_second_moment: f64,
    /// First absolute moment `E|s|` of the transmitted symbol law.
    pub symbol_abs_moment: f64,
    /// Quantizer half-range of the digital scheme.
    pub delta_g: f64,
}

impl LatencyInput {
    /// Checks every invariant.
    ///
    /// # Panics
    ///
    /// Panics with the violated constraint.
    pub fn validate(&self) {
        for (name, v) in [
            ("bandwidth_hz", self.bandwidth_hz),
            ("symbol_time_s", self.symbol_time_s),
            ("n", self.n),
            ("sigma_z2", self.sigma_z2),
            ("sigma_h2", self.sigma_h2),
            ("symbol_second_moment", self.symbol_second_moment),
            ("delta_g", self.delta_g),
        ] {
            assert!(v.is_finite() && v > 0.0, "{} must be positive, got {}", name, v);
        }
        assert!(
            self.symbol_abs_moment.is_finite() && self.symbol_abs_moment >= 0.0,
            "symbol_abs_moment must be nonnegative, got {}",
            self.symbol_abs_moment
        );
        assert!(self.k >= 1, "device count K must be at least 1");
        assert!(self.n_r >= 1, "antenna count N_r must be at least 1");
        check_q(self.q);
    }

    /// A broadband reference setting used by the latency experiments:
    /// `B = 1 kHz`, millisecond symbols, a five-million-parameter model,
    /// 100 devices, a large blind-combining array, unit fading and noise
    /// variances, and symbols uniform on `[0, 1]` (second moment `1/3`,
    /// absolute moment `1/2`). Mutate fields (`q`, `k`, `delta_g`, ...)
    /// to sweep one axis at a time.
    pub fn broadband_base() -> Self {
        Self {
            bandwidth_hz: 1_000.0,
            symbol_time_s: 1e-3,
            n: 5e6,
            k: 100,
            n_r: 24_000,
            q: 64,
            sigma_z2: 1.0,
            sigma_h2: 1.0,
            symbol_second_moment: 1.0 / 3.0,
            symbol_abs_moment: 0.5,
            delta_g: 0.05,
        }
    }
}

/// Latency comparison of the three uplink designs at a common distortion
/// operating point. Infinite latency (a scheme whose achievable rate is
/// zero because its distortion is not below the source power) is reported
/// as `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatencyReport {
    /// Analog (uncoded) over-the-air aggregation latency in seconds.
    pub t_analog: f64,
    /// Digital over-the-air aggregation latency in seconds.
    pub t_compfed: f64,
    /// Orthogonal per-device uplink latency in seconds.
    pub t_ofdma: f64,
    /// Ratio of the analog and digital log-distortion terms; approaches 1
    /// as the modulation order grows.
    pub gamma_ratio: f64,
}

/// Achievable-rate form used throughout the latency model: nats per
/// second at source power `sigma_s2` and mean-squared distortion
/// `sigma_d2`, floored at zero.
fn rate(bandwidth_hz: f64, sigma_s2: f64, sigma_d2: f64) -> f64 {
    (bandwidth_hz * (sigma_s2 / sigma_d2).ln()).max(0.0)
}

fn time_for(symbols: f64, symbol_time_s: f64, rate: f64) -> f64 {
    if rate == 0.0 {
        f64::INFINITY
    } else {
        symbol_time_s * symbols / rate
    }
}

/// Evaluates the full latency comparison:
///
/// - analog distortion
///   `sigma_z^2/(N_r K sigma_h^2) + (K-1) (E|s|)^2 / (3 N_r)`
///   (blind-combining noise plus cross-device interference);
/// - digital distortion
///   `(2 delta_g)^2/(q^2 K) + (1+q) e~_r^2 / K^2`, where the decision
///   moment `e~_r` is evaluated at the sum-scale deviation
///   `K * sigma_d_analog` on a single branch;
/// - the digital source term carries the `2 q^2 / (q + 1)` power-economy
///   factor of the lattice constellation;
/// - the orthogonal baseline pays `K` sequential single links at the
///   digital distortion and the analog source power.
///
/// Latencies are `T_s * N / R`; `gamma_ratio` is the ratio of the two
/// log-distortion terms.
pub fn latency_suite(input: &LatencyInput) -> LatencyReport {
    input.validate();
    let kf = input.k as f64;
    let qf = input.q as f64;
    let b = input.bandwidth_hz;

    let sigma_s_analog2 = input.symbol_second_moment;
    let sigma_int2 = input.symbol_abs_moment * input.symbol_abs_moment;
    let sigma_d_analog2 = input.sigma_z2 / (input.n_r as f64 * kf * input.sigma_h2)
        + (kf - 1.0) * sigma_int2 / (3.0 * input.n_r as f64);

    let e_tilde = symbol_error_moment(input.q, kf * sigma_d_analog2.sqrt(), 1);
    let delta_q = 2.0 * input.delta_g;
    let sigma_d_digital2 =
        delta_q * delta_q / (qf * qf * kf) + (1.0 + qf) * e_tilde * e_tilde / (kf * kf);
    let sigma_s_digital2 = sigma_s_analog2 * 2.0 * qf * qf / (qf + 1.0);

    let rate_analog = rate(b, sigma_s_analog2, sigma_d_analog2);
    let rate_digital = rate(b, sigma_s_digital2, sigma_d_digital2);
    let rate_single = rate(b, sigma_s_analog2, sigma_d_digital2);

    let t_analog = time_for(input.n, input.symbol_time_s, rate_analog);
    let t_compfed = time_for(input.n, input.symbol_time_s, rate_digital);
    let t_ofdma = kf * time_for(input.n, input.symbol_time_s, rate_single);

    let gamma_ratio = (sigma_s_analog2 / sigma_d_analog2).ln()
        / (sigma_s_digital2 / sigma_d_digital2).ln();

    LatencyReport {
        t_analog,
        t_compfed,
        t_ofdma,
        gamma_ratio,
    }
}

// ------------------------------------------------------------------ tests
