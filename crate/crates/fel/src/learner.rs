//! Desk-scale learners with analytic gradients.
//!
//! Three model families share one parameter-vector interface: linear
//! regression onto one-hot targets (squared error), softmax regression
//! (cross-entropy), and a one-hidden-layer tanh MLP (either loss). All
//! losses are means over the samples involved, so gradients from shards
//! of equal size average into the full-dataset gradient.

use crate::data::Dataset;
use rand::seq::SliceRandom;
use rand::Rng;

// ------------------------------------------------------------------- spec

/// Model family of a learner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LearnerFamily {
    /// Affine map onto one-hot targets, trained with squared error.
    LinearRegression,
    /// Affine map followed by softmax, trained with cross-entropy.
    SoftmaxRegression,
    /// Affine -> tanh -> affine, trained with either loss.
    OneHiddenLayerMlp,
}

/// Training loss.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Loss {
    /// `0.5 * sum_j (logit_j - onehot_j)^2`, averaged over samples.
    SquaredError,
    /// `-log softmax(logits)[label]`, averaged over samples.
    CrossEntropy,
}

/// Shape and loss of a learner; the parameter vector layout follows from
/// it (`param_count`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LearnerSpec {
    /// Model family.
    pub family: LearnerFamily,
    /// Input feature dimension. Zero is allowed and gives a bias-only
    /// model — handy for exactly quadratic objectives.
    pub input_dim: u32,
    /// Output class count.
    pub class_count: u32,
    /// Hidden width (MLP only; ignored by the affine families).
    pub hidden_units: u32,
    /// Training loss.
    pub loss: Loss,
}

impl LearnerSpec {
    /// Checks the shape and the family/loss pairing.
    ///
    /// # Panics
    ///
    /// Panics with the violated constraint.
    pub fn validate(&self) {
        assert!(self.class_count >= 1, "class count must be at least 1");
        match self.family {
            LearnerFamily::LinearRegression => assert!(
                self.loss == Loss::SquaredError,
                "linear regression trains with the squared-error loss"
            ),
            LearnerFamily::SoftmaxRegression => {
                assert!(
                    self.loss == Loss::CrossEntropy,
                    "softmax regression trains with the cross-entropy loss"
                );
                assert!(
                    self.class_count >= 2,
                    "softmax regression needs at least 2 classes"
                );
            }
            LearnerFamily::OneHiddenLayerMlp => assert!(
                self.hidden_units >= 1,
                "the MLP needs at least 1 hidden unit"
            ),
        }
    }

    /// Length of the parameter vector: weights then biases per layer.
    pub fn param_count(&self) -> usize {
        let d = self.input_dim as usize;
        let c = self.class_count as usize;
        match self.family {
            LearnerFamily::LinearRegression | LearnerFamily::SoftmaxRegression => c * (d + 1),
            LearnerFamily::OneHiddenLayerMlp => {
                let h = self.hidden_units as usize;
                h * (d + 1) + c * (h + 1)
            }
        }
    }
}

/// Model parameters plus the round index they belong to.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerState {
    /// Parameter vector (layout per [`LearnerSpec::param_count`]).
    pub w: Vec<f64>,
    /// Round index.
    pub round: u32,
}

impl LearnerState {
    /// Wraps a parameter vector at round zero.
    ///
    /// # Panics
    ///
    /// Panics if any entry is not finite.
    pub fn new(w: Vec<f64>) -> Self {
        let state = Self { w, round: 0 };
        state.validate();
        state
    }

    /// Checks that every parameter is finite.
    ///
    /// # Panics
    ///
    /// Panics on a non-finite entry.
    pub fn validate(&self) {
        assert!(
            self.w.iter().all(|v| v.is_finite()),
            "model parameters must be finite"
        );
    }
}

// -------------------------------------------------------- forward/backward

struct Scratch {
    logits: Vec<f64>,
    hidden: Vec<f64>,
}

impl Scratch {
    fn for_spec(spec: &LearnerSpec) -> Self {
        Self {
            logits: vec![0.0; spec.class_count as usize],
            hidden: vec![0.0; spec.hidden_units as usize],
        }
    }
}

/// Loss of one sample; when `grad` is given, accumulates (adds) the
/// per-sample gradient into it. `scratch.logits` holds the forward logits
/// afterwards.
fn sample_loss(
    spec: &LearnerSpec,
    w: &[f64],
    x: &[f64],
    label: u32,
    scratch: &mut Scratch,
    grad: Option<&mut [f64]>,
) -> f64 {
    let d = spec.input_dim as usize;
    let c = spec.class_count as usize;
    debug_assert_eq!(x.len(), d);

    // Forward pass.
    match spec.family {
        LearnerFamily::LinearRegression | LearnerFamily::SoftmaxRegression => {
            let (weights, bias) = w.split_at(c * d);
            for j in 0..c {
                let row = &weights[j * d..(j + 1) * d];
                scratch.logits[j] =
                    bias[j] + row.iter().zip(x).map(|(wv, xv)| wv * xv).sum::<f64>();
            }
        }
        LearnerFamily::OneHiddenLayerMlp => {
            let h = spec.hidden_units as usize;
            let (w1, rest) = w.split_at(h * d);
            let (b1, rest) = rest.split_at(h);
            let (w2, b2) = rest.split_at(c * h);
            for u in 0..h {
                let row = &w1[u * d..(u + 1) * d];
                let pre = b1[u] + row.iter().zip(x).map(|(wv, xv)| wv * xv).sum::<f64>();
                scratch.hidden[u] = pre.tanh();
            }
            for j in 0..c {
                let row = &w2[j * h..(j + 1) * h];
                scratch.logits[j] = b2[j]
                    + row
                        .iter()
                        .zip(&scratch.hidden)
                        .map(|(wv, hv)| wv * hv)
                        .sum::<f64>();
            }
        }
    }

    // Loss and the gradient with respect to the logits (reusing the logit
    // buffer once the loss is out).
    let loss = match spec.loss {
        Loss::SquaredError => {
            let mut loss = 0.0;
            for (j, logit) in scratch.logits.iter_mut().enumerate() {
                let target = if j == label as usize { 1.0 } else { 0.0 };
                let diff = *logit - target;
                loss += 0.5 * diff * diff;
                *logit = diff;
            }
            loss
        }
        Loss::CrossEntropy => {
            let max = scratch.logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mut sum = 0.0;
            for logit in scratch.logits.iter_mut() {
                *logit = (*logit - max).exp();
                sum += *logit;
            }
            let loss = sum.ln() + max
                - (scratch.logits[label as usize].ln() + max);
            for (j, logit) in scratch.logits.iter_mut().enumerate() {
                let p = *logit / sum;
                *logit = p - if j == label as usize { 1.0 } else { 0.0 };
            }
            loss
        }
    };

    // Backward pass.
    if let Some(grad) = grad {
        let dlogits = &scratch.logits;
        match spec.family {
            LearnerFamily::LinearRegression | LearnerFamily::SoftmaxRegression => {
                let (gw, gb) = grad.split_at_mut(c * d);
                for j in 0..c {
                    let g = dlogits[j];
                    for (gwv, xv) in gw[j * d..(j + 1) * d].iter_mut().zip(x) {
                        *gwv += g * xv;
                    }
                    gb[j] += g;
                }
            }
            LearnerFamily::OneHiddenLayerMlp => {
                let h = spec.hidden_units as usize;
                let split = h * d + h; // end of the first layer's parameters
                let w2 = &w[split..split + c * h];
                let (g1, grest) = grad.split_at_mut(split);
                let (gw1, gb1) = g1.split_at_mut(h * d);
                let (gw2, gb2) = grest.split_at_mut(c * h);
                let mut dhidden = vec![0.0; h];
                for j in 0..c {
                    let g = dlogits[j];
                    for (u, (gwv, hv)) in gw2[j * h..(j + 1) * h]
                        .iter_mut()
                        .zip(&scratch.hidden)
                        .enumerate()
                    {
                        *gwv += g * hv;
                        dhidden[u] += g * w2[j * h + u];
                    }
                    gb2[j] += g;
                }
                for u in 0..h {
                    let dpre = dhidden[u] * (1.0 - scratch.hidden[u] * scratch.hidden[u]);
                    for (gwv, xv) in gw1[u * d..(u + 1) * d].iter_mut().zip(x) {
                        *gwv += dpre * xv;
                    }
                    gb1[u] += dpre;
                }
            }
        }
    }

    loss
}

// -------------------------------------------------------- public gradients

/// Mean loss over the shard given by `indices` into the training set.
///
/// # Panics
///
/// Panics on an empty shard or a parameter-count mismatch.
pub fn shard_loss(spec: &LearnerSpec, w: &[f64], data: &Dataset, indices: &[usize]) -> f64 {
    spec.validate();
    assert!(!indices.is_empty(), "loss requires a nonempty shard");
    assert_eq!(
        w.len(),
        spec.param_count(),
        "parameter vector length mismatch"
    );
    assert_eq!(
        data.feature_dim(),
        spec.input_dim as usize,
        "dataset dimension does not match the learner input dimension"
    );
    let mut scratch = Scratch::for_spec(spec);
    let mut total = 0.0;
    for &i in indices {
        let (x, y) = data.train_sample(i);
        total += sample_loss(spec, w, x, y, &mut scratch, None);
    }
    total / indices.len() as f64
}

/// Mean-loss gradient over the shard given by `indices` into the training
/// set.
///
/// # Panics
///
/// Panics on an empty shard or a parameter-count mismatch.
pub fn shard_gradient(
    spec: &LearnerSpec,
    w: &[f64],
    data: &Dataset,
    indices: &[usize],
) -> Vec<f64> {
    spec.validate();
    assert!(!indices.is_empty(), "gradient requires a nonempty shard");
    assert_eq!(
        w.len(),
        spec.param_count(),
        "parameter vector length mismatch"
    );
    assert_eq!(
        data.feature_dim(),
        spec.input_dim as usize,
        "dataset dimension does not match the learner input dimension"
    );
    let mut scratch = Scratch::for_spec(spec);
    let mut grad = vec![0.0; w.len()];
    for &i in indices {
        let (x, y) = data.train_sample(i);
        sample_loss(spec, w, x, y, &mut scratch, Some(&mut grad));
    }
    let inv = 1.0 / indices.len() as f64;
    for g in &mut grad {
        *g *= inv;
    }
    grad
}

/// Mean loss and accuracy of `w` on a labeled feature array (row-major,
/// `labels.len()` rows of `input_dim` values). Argmax ties resolve to the
/// lowest class index.
///
/// # Panics
///
/// Panics if the array shapes disagree with the spec.
pub fn evaluate(spec: &LearnerSpec, w: &[f64], features: &[f64], labels: &[u32]) -> (f64, f64) {
    spec.validate();
    assert_eq!(
        w.len(),
        spec.param_count(),
        "parameter vector length mismatch"
    );
    let d = spec.input_dim as usize;
    assert!(
        features.len() == labels.len() * d,
        "evaluation features hold {} values, expected {} samples x {} dims",
        features.len(),
        labels.len(),
        d
    );
    assert!(!labels.is_empty(), "evaluation requires at least one sample");
    let mut scratch = Scratch::for_spec(spec);
    let mut total = 0.0;
    let mut correct = 0usize;
    for (row, &label) in labels.iter().enumerate() {
        let x = &features[row * d..(row + 1) * d];
        total += sample_loss_with_argmax(spec, w, x, label, &mut scratch, &mut correct);
    }
    let n = labels.len() as f64;
    (total / n, correct as f64 / n)
}

/// As [`sample_loss`] without gradient, also counting an argmax hit into
/// `correct`.
fn sample_loss_with_argmax(
    spec: &LearnerSpec,
    w: &[f64],
    x: &[f64],
    label: u32,
    scratch: &mut Scratch,
    correct: &mut usize,
) -> f64 {
    let loss = sample_loss(spec, w, x, label, scratch, None);
    // The loss pass leaves prediction - onehot in the logit buffer (the
    // softmax is order-preserving, so its argmax matches the logits');
    // adding the onehot back restores the prediction for the argmax.
    let mut best = f64::NEG_INFINITY;
    let mut best_j = 0usize;
    for (j, &dl) in scratch.logits.iter().enumerate() {
        let restored = dl + if j == label as usize { 1.0 } else { 0.0 };
        if restored > best {
            best = restored;
            best_j = j;
        }
    }
    if best_j == label as usize {
        *correct += 1;
    }
    loss
}

/// Local gradient of one device for a round.
///
/// With `local_epochs = 0` this is a single mean gradient: over the whole
/// shard when `batch_size` covers it, otherwise over `batch_size` samples
/// drawn without replacement. With `local_epochs >= 1` the device runs
/// that many epochs of mini-batch SGD at rate `eta` (fresh shuffle each
/// epoch) and reports the effective gradient
/// `(w_start - w_end) / eta`, which for one epoch at full batch reduces
/// to the plain gradient.
///
/// # Panics
///
/// Panics on an empty shard, a zero batch size, or a nonpositive `eta`.
#[allow(clippy::too_many_arguments)]
pub fn local_gradient(
    spec: &LearnerSpec,
    state: &LearnerState,
    data: &Dataset,
    shard: &[usize],
    batch_size: usize,
    local_epochs: u32,
    eta: f64,
    rng: &mut impl Rng,
) -> Vec<f64> {
    assert!(!shard.is_empty(), "local gradient requires a nonempty shard");
    assert!(batch_size >= 1, "batch size must be at least 1");
    assert!(
        eta.is_finite() && eta > 0.0,
        "learning rate must be positive, got {}",
        eta
    );

    if local_epochs == 0 {
        if batch_size >= shard.len() {
            return shard_gradient(spec, &state.w, data, shard);
        }
        let picks: Vec<usize> = rand::seq::index::sample(rng, shard.len(), batch_size)
            .iter()
            .map(|i| shard[i])
            .collect();
        return shard_gradient(spec, &state.w, data, &picks);
    }

    let mut w_local = state.w.clone();
    let mut order = shard.to_vec();
    for _ in 0..local_epochs {
        order.shuffle(rng);
        for chunk in order.chunks(batch_size) {
            let g = shard_gradient(spec, &w_local, data, chunk);
            for (wv, gv) in w_local.iter_mut().zip(&g) {
                *wv -= eta * gv;
            }
        }
    }
    state
        .w
        .iter()
        .zip(&w_local)
        .map(|(start, end)| (start - end) / eta)
        .collect()
}

// ------------------------------------------------------------------ tests
