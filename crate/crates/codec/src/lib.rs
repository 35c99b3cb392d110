//! Uniform gradient quantization and a square-QAM lattice codec for
//! over-the-air summation.
//!
//! The codec owns three jobs:
//!
//! - **Quantize** real gradient entries into `q` uniform cells over the
//!   clip range `[-delta_g, +delta_g]`, and reconstruct cell centers back
//!   (including fractional average levels on the finer `q * k` grid).
//! - **Encode** a level `v` in `[0, q-1]` as a complex lattice point whose
//!   in-phase coordinate carries the residue `v mod 2^b` and whose
//!   quadrature carries the quotient `v div 2^b`, both recentred to a
//!   zero-mean, unit-spaced, half-integer grid.
//! - **Decode** a (noisy) superposition of `k` such points back to the
//!   exact integer sum of the levels: the sum of `k` lattice points lives
//!   on a shifted integer lattice, so component-wise nearest-integer
//!   rounding with a `k`-dependent offset recovers the residue sum and the
//!   quotient sum separately, and `sum = residues + 2^b * quotients`.
//!
//! Every operation is a pure function; the decoder tolerates additive
//! noise up to (but excluding) 0.5 per real dimension without error.
//!
//! # Example
//!
//! ```
//! use num_complex::Complex64;
//! use oac_codec::{decode_sum, encode, QuantizerSpec};
//!
//! let spec = QuantizerSpec::new(16, 1.0);
//! let gradients = [-0.73, 0.12, 0.64];
//! let levels: Vec<u32> = gradients.iter().map(|&g| spec.quantize(g)).collect();
//!
//! // Superpose the three QAM symbols as a multiple-access channel would.
//! let sum: Complex64 = levels
//!     .iter()
//!     .map(|&v| encode(v, 16).as_complex())
//!     .sum();
//!
//! let decoded = decode_sum(sum, 3, 16);
//! assert_eq!(decoded.value(), levels.iter().map(|&v| v as u64).sum());
//! let average = spec.dequantize(decoded.avg());
//! assert!((average - gradients.iter().sum::<f64>() / 3.0).abs() <= 1.0 / 16.0);
//! ```

use num_complex::Complex64;

// --------------------------------------------------------------- quantizer

/// Uniform mid-rise quantizer over `[-delta_g, +delta_g]` with `q` cells.
///
/// `q` must be a power of four so that a level splits evenly into `b`
/// residue bits and `b` quotient bits per complex symbol (`q = 2^(2b)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizerSpec {
    q: u32,
    delta_g: f64,
}

impl QuantizerSpec {
    /// Creates a quantizer with `q` levels over `[-delta_g, +delta_g]`.
    ///
    /// # Panics
    ///
    /// Panics if `q` is not a power of four (at least 4) or if `delta_g`
    /// is not a positive finite number.
    pub fn new(q: u32, delta_g: f64) -> Self {
        assert!(
            q >= 4 && q.is_power_of_two() && q.trailing_zeros().is_multiple_of(2),
            "q must be a power of 4, got {}",
            q
        );
        assert!(
            delta_g.is_finite() && delta_g > 0.0,
            "delta_g must be positive and finite, got {}",
            delta_g
        );
        Self { q, delta_g }
    }

    /// Number of quantization levels.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Clip bound: inputs are clamped to `[-delta_g, +delta_g]`.
    pub fn delta_g(&self) -> f64 {
        self.delta_g
    }

    /// `b = log2(q) / 2`, the per-dimension bit width of a symbol.
    pub fn half_bits(&self) -> u32 {
        self.q.trailing_zeros() / 2
    }

    /// Per-dimension grid side `2^b`, so `q = side * side`.
    pub fn side(&self) -> u32 {
        1 << self.half_bits()
    }

    /// Width of one quantizer cell, `2 * delta_g / q`.
    pub fn cell_width(&self) -> f64 {
        2.0 * self.delta_g / self.q as f64
    }

    /// Maps a gradient entry to its cell index in `[0, q-1]`.
    ///
    /// The input is clipped to `[-delta_g, +delta_g]` first. Values on an
    /// interior cell boundary belong to the higher cell; `g <= -delta_g`
    /// maps to 0 and `g >= +delta_g` maps to `q - 1`.
    pub fn quantize(&self, g: f64) -> u32 {
        assert!(!g.is_nan(), "cannot quantize NaN");
        let scaled = (g + self.delta_g) * self.q as f64 / (2.0 * self.delta_g);
        // floor sends exact boundary hits to the higher cell; the final
        // clamp handles both clip directions and the g == +delta_g edge.
        let cell = scaled.floor();
        (cell.max(0.0).min((self.q - 1) as f64)) as u32
    }

    /// Reconstructs the cell-center value for a (possibly fractional)
    /// average level.
    ///
    /// Fractional inputs arise when an exact integer sum over `k` users is
    /// divided by `k`: the reconstruction grid then has `q * k` points.
    ///
    /// # Panics
    ///
    /// Panics if `avg_level` is outside `[0, q-1]` or not finite.
    pub fn dequantize(&self, avg_level: f64) -> f64 {
        assert!(
            avg_level.is_finite() && avg_level >= 0.0 && avg_level <= (self.q - 1) as f64,
            "average level {} outside [0, {}]",
            avg_level,
            self.q - 1
        );
        -self.delta_g + (avg_level + 0.5) * self.cell_width()
    }
}

// ------------------------------------------------------------ lattice code

/// One complex QAM lattice point: residue on the in-phase axis, quotient
/// on the quadrature axis, both on the zero-mean half-integer grid
/// `{i - (2^b - 1)/2 : i = 0..2^b-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncodedSymbol {
    re: f64,
    im: f64,
}

impl EncodedSymbol {
    /// Builds a symbol from explicit coordinates.
    ///
    /// # Panics
    ///
    /// Panics if either coordinate is not an exact half-odd-integer
    /// (`x = n + 0.5` for integer `n`), which is the only grid the encoder
    /// emits.
    pub fn new(re: f64, im: f64) -> Self {
        for (name, v) in [("re", re), ("im", im)] {
            assert!(
                v.is_finite() && (v - v.floor() - 0.5).abs() == 0.0,
                "{} = {} is not on the half-integer grid",
                name,
                v
            );
        }
        Self { re, im }
    }

    /// In-phase coordinate (carries the level residue).
    pub fn re(&self) -> f64 {
        self.re
    }

    /// Quadrature coordinate (carries the level quotient).
    pub fn im(&self) -> f64 {
        self.im
    }

    /// The symbol as a complex number.
    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Exact integer sum of `k` levels, as recovered by [`decode_sum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelSum {
    value: u64,
    k: u32,
}

impl LevelSum {
    /// The decoded sum, in `[0, k * (q - 1)]`.
    pub fn value(&self) -> u64 {
        self.value
    }

    /// Number of superposed participants.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Average level `value / k` on the finer `q * k` grid.
    pub fn avg(&self) -> f64 {
        self.value as f64 / self.k as f64
    }
}

fn check_q(q: u32) {
    assert!(
        q >= 4 && q.is_power_of_two() && q.trailing_zeros().is_multiple_of(2),
        "q must be a power of 4, got {}",
        q
    );
}

/// Maps a level in `[0, q-1]` onto the QAM lattice:
/// `re = (level mod 2^b) + (1 - 2^b)/2`, `im = (level div 2^b) + (1 - 2^b)/2`.
///
/// The map is a bijection from levels onto the `q`-point grid.
///
/// # Panics
///
/// Panics if `q` is not a power of four or `level >= q`.
pub fn encode(level: u32, q: u32) -> EncodedSymbol {
    check_q(q);
    assert!(level < q, "level {} out of range for q = {}", level, q);
    let side = 1u32 << (q.trailing_zeros() / 2);
    let recentre = (1.0 - side as f64) / 2.0;
    EncodedSymbol {
        re: (level % side) as f64 + recentre,
        im: (level / side) as f64 + recentre,
    }
}

/// Rounds to the nearest half-odd-integer, ties upward:
/// `R(z) = floor(z) + 0.5`.
///
/// Half-odd-integers are fixed points; integers (the midpoints between two
/// grid values) resolve upward; every result is within 0.5 of the input.
/// Exposed for diagnostics; the decoder itself works on the integer grid
/// after removing the `k`-dependent offset.
pub fn round_half(z: f64) -> f64 {
    assert!(z.is_finite(), "round_half requires a finite input");
    z.floor() + 0.5
}

/// Decodes a (noisy) superposition of `k` encoded symbols to the exact
/// integer sum of their levels.
///
/// The sum of `k` lattice points has each coordinate on the integer grid
/// shifted by `-k * (2^b - 1)/2`. Decoding adds the offset back, rounds
/// each coordinate to the nearest integer (ties upward), clamps it into
/// the valid `[0, k * (2^b - 1)]` range, and recombines:
/// `value = m_re + 2^b * m_im`.
///
/// Noise tolerance: if each of `Re` and `Im` is perturbed by strictly
/// less than 0.5, the decoded sum is exact.
///
/// # Panics
///
/// Panics if `q` is invalid, `k == 0`, or `s_hat` is not finite.
pub fn decode_sum(s_hat: Complex64, k: u32, q: u32) -> LevelSum {
    check_q(q);
    assert!(k >= 1, "participant count k must be at least 1");
    assert!(
        s_hat.re.is_finite() && s_hat.im.is_finite(),
        "cannot decode a non-finite sample"
    );
    let side = 1u64 << (q.trailing_zeros() / 2);
    let per_dim_max = k as u64 * (side - 1);
    let offset = per_dim_max as f64 / 2.0;
    let snap = |x: f64| -> u64 {
        // Nearest integer with half-way ties rounding up.
        let idx = (x + offset + 0.5).floor();
        idx.max(0.0).min(per_dim_max as f64) as u64
    };
    LevelSum {
        value: snap(s_hat.re) + side * snap(s_hat.im),
        k,
    }
}

/// Decodes a superposition to the average level `sum / k` on the finer
/// `q * k` grid.
///
/// # Panics
///
/// As [`decode_sum`].
pub fn decode_avg(s_hat: Complex64, k: u32, q: u32) -> f64 {
    decode_sum(s_hat, k, q).avg()
}

/// Enumerates the full `q`-point constellation in level order.
///
/// # Panics
///
/// Panics if `q` is not a power of four.
pub fn constellation(q: u32) -> Vec<EncodedSymbol> {
    check_q(q);
    (0..q).map(|level| encode(level, q)).collect()
}

// ------------------------------------------------------------------- tests
