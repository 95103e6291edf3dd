//! Streaming single-sample update rules for the LMS family.
//!
//! Every rule is a pure state transition: it reads a [`WeightState`], the
//! current tap-delay window and desired sample, and returns the prediction
//! error together with the next state. Six variants are provided:
//!
//! ```text
//! standard   w' = w + mu e x
//! ZA         w' = w + mu e x - rho sgn(w)
//! RZA        w' = w + mu e x - rho sgn(w) / (1 + eps |w|)
//! RL1        w' = w + mu e x - rho sgn(w) / (eps + |w_prev|)
//! LP         w' = w + mu e x - rho ||w||_p^(1-p) sgn(w) / (eps + |w|^(1-p))
//! oracle     w' = w + mu e x restricted to the known support, 0 elsewhere
//! ```
//!
//! with `e = d - w.x`, `sgn(0) = 0`, and all vector operations element-wise.
//! The reweighted-l1 rule is the only one that reads the previous estimate
//! `w_prev`; the others carry it along untouched so all variants share one
//! state type. With `rho = 0` every penalized rule reduces to the standard
//! update on the identical arithmetic path, so trajectories match bit for
//! bit.

use crate::error::{Error, Result};

/// Component-wise sign with `sgn(0) = 0`.
#[inline]
pub fn sgn(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Current and previous coefficient estimates.
///
/// Both vectors always have the same length; `previous` lags `current` by one
/// update and feeds the reweighted-l1 denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightState {
    current: Vec<f64>,
    previous: Vec<f64>,
}

impl WeightState {
    /// All-zero state of dimension `n` (the conventional cold start, which
    /// makes the first reweighted-l1 denominator exactly `eps`).
    pub fn zeros(n: usize) -> Self {
        WeightState {
            current: vec![0.0; n],
            previous: vec![0.0; n],
        }
    }

    /// State from explicit current/previous vectors.
    pub fn new(current: Vec<f64>, previous: Vec<f64>) -> Result<Self> {
        if current.is_empty() {
            return Err(Error::Contract("weight vector must be non-empty".into()));
        }
        if current.len() != previous.len() {
            return Err(Error::Contract(format!(
                "current ({}) and previous ({}) estimate lengths differ",
                current.len(),
                previous.len()
            )));
        }
        if current.iter().chain(previous.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Contract("weight state entries must be finite".into()));
        }
        Ok(WeightState { current, previous })
    }

    pub fn len(&self) -> usize {
        self.current.len()
    }

    pub fn is_empty(&self) -> bool {
        self.current.is_empty()
    }

    /// Current estimate w_k.
    pub fn weights(&self) -> &[f64] {
        &self.current
    }

    /// Previous estimate w_{k-1}.
    pub fn previous(&self) -> &[f64] {
        &self.previous
    }

    pub fn norm2(&self) -> f64 {
        self.current.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Sliding window of the most recent input samples, newest first.
#[derive(Debug, Clone, PartialEq)]
pub struct TapDelayLine {
    taps: Vec<f64>,
}

impl TapDelayLine {
    /// Zero-filled window of length `n` (streaming warm-up convention).
    pub fn zeros(n: usize) -> Self {
        TapDelayLine { taps: vec![0.0; n] }
    }

    /// Window from explicit samples ordered `[x_k, x_{k-1}, ...]`.
    pub fn from_samples(taps: Vec<f64>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::Contract("delay line must be non-empty".into()));
        }
        if taps.iter().any(|v| !v.is_finite()) {
            return Err(Error::Contract("delay line entries must be finite".into()));
        }
        Ok(TapDelayLine { taps })
    }

    /// Shift the window one position and insert `sample` at the front,
    /// dropping the oldest entry.
    pub fn push(&mut self, sample: f64) {
        self.taps.rotate_right(1);
        self.taps[0] = sample;
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.taps
    }
}

/// Filter variant plus its penalty parameters.
///
/// `rho` values are the update-equation coefficients (`rho = mu * gamma` in
/// terms of the cost-function weights).
#[derive(Debug, Clone, PartialEq)]
pub enum Variant {
    Standard,
    /// Zero-attracting (l1 penalty): constant shrinkage `rho`.
    Za { rho: f64 },
    /// Reweighted zero-attracting (log penalty): shrinkage `rho / (1 + eps |w|)`.
    Rza { rho: f64, eps: f64 },
    /// Reweighted l1 penalty: shrinkage `rho / (eps + |w_prev|)`.
    Rl1 { rho: f64, eps: f64 },
    /// lp pseudo-norm penalty, `0 < p < 1`, denominator regularized by `eps`.
    Lp { rho: f64, eps: f64, p: f64 },
    /// Standard update restricted to a known support (0-based indices).
    Oracle { support: Vec<usize> },
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Standard => "standard",
            Variant::Za { .. } => "za",
            Variant::Rza { .. } => "rza",
            Variant::Rl1 { .. } => "rl1",
            Variant::Lp { .. } => "lp",
            Variant::Oracle { .. } => "oracle",
        }
    }
}

/// Validated step size + variant bundle consumed by [`step`].
#[derive(Debug, Clone, PartialEq)]
pub struct FilterParams {
    pub mu: f64,
    pub variant: Variant,
}

impl FilterParams {
    pub fn new(mu: f64, variant: Variant) -> Result<Self> {
        if !mu.is_finite() || mu <= 0.0 {
            return Err(Error::Contract(format!("step size mu must be positive, got {mu}")));
        }
        match &variant {
            Variant::Standard => {}
            Variant::Za { rho } => validate_rho(*rho)?,
            Variant::Rza { rho, eps } | Variant::Rl1 { rho, eps } => {
                validate_rho(*rho)?;
                validate_eps(*eps)?;
            }
            Variant::Lp { rho, eps, p } => {
                validate_rho(*rho)?;
                validate_eps(*eps)?;
                if p.is_nan() || *p <= 0.0 || *p >= 1.0 {
                    return Err(Error::Contract(format!("lp exponent p must lie in (0,1), got {p}")));
                }
            }
            Variant::Oracle { .. } => {}
        }
        Ok(FilterParams { mu, variant })
    }

    /// Check index-set invariants that depend on the filter length.
    pub fn validate_for_len(&self, n: usize) -> Result<()> {
        if let Variant::Oracle { support } = &self.variant {
            if let Some(&bad) = support.iter().find(|&&i| i >= n) {
                return Err(Error::Contract(format!(
                    "oracle support index {bad} out of range for length {n}"
                )));
            }
        }
        Ok(())
    }
}

fn validate_rho(rho: f64) -> Result<()> {
    if !rho.is_finite() || rho < 0.0 {
        return Err(Error::Contract(format!("penalty weight rho must be >= 0, got {rho}")));
    }
    Ok(())
}

fn validate_eps(eps: f64) -> Result<()> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::Contract(format!("regularizer eps must be positive, got {eps}")));
    }
    Ok(())
}

/// Prediction error and successor state produced by one update.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutput {
    /// `e = d - w.x`, computed before the update.
    pub error: f64,
    pub next: WeightState,
}

/// Prediction error `d - w.x` without updating the state.
pub fn predict_and_error(state: &WeightState, x: &TapDelayLine, d: f64) -> Result<f64> {
    if state.len() != x.len() {
        return Err(Error::Contract(format!(
            "state length {} does not match delay line length {}",
            state.len(),
            x.len()
        )));
    }
    let predicted: f64 = state
        .current
        .iter()
        .zip(x.samples())
        .map(|(w, s)| w * s)
        .sum();
    let e = d - predicted;
    if !e.is_finite() {
        return Err(Error::Contract(format!("non-finite prediction error (d = {d})")));
    }
    Ok(e)
}

/// Shared scaffold: compute the error once, then build the next estimate by
/// applying `update(i, base_i)` to each base term `w[i] + mu e x[i]`.
fn step_with<F>(state: &WeightState, x: &TapDelayLine, d: f64, mu: f64, update: F) -> Result<StepOutput>
where
    F: Fn(usize, f64) -> f64,
{
    let e = predict_and_error(state, x, d)?;
    let mu_e = mu * e;
    let next_w: Vec<f64> = state
        .current
        .iter()
        .zip(x.samples())
        .enumerate()
        .map(|(i, (&w, &xi))| update(i, w + mu_e * xi))
        .collect();
    Ok(StepOutput {
        error: e,
        next: WeightState {
            current: next_w,
            previous: state.current.clone(),
        },
    })
}

/// Standard LMS update.
pub fn lms_step(state: &WeightState, x: &TapDelayLine, d: f64, mu: f64) -> Result<StepOutput> {
    step_with(state, x, d, mu, |_, base| base)
}

/// Zero-attracting LMS update.
pub fn za_step(state: &WeightState, x: &TapDelayLine, d: f64, mu: f64, rho: f64) -> Result<StepOutput> {
    let w = state.weights();
    step_with(state, x, d, mu, |i, base| base - rho * sgn(w[i]))
}

/// Reweighted zero-attracting LMS update.
pub fn rza_step(
    state: &WeightState,
    x: &TapDelayLine,
    d: f64,
    mu: f64,
    rho: f64,
    eps: f64,
) -> Result<StepOutput> {
    let w = state.weights();
    step_with(state, x, d, mu, |i, base| {
        base - rho * (sgn(w[i]) / (1.0 + eps * w[i].abs()))
    })
}

/// Reweighted l1-norm penalized LMS update. The shrinkage denominator reads
/// the previous estimate, so each coefficient's penalty magnitude is bounded
/// by `rho / eps`.
pub fn rl1_step(
    state: &WeightState,
    x: &TapDelayLine,
    d: f64,
    mu: f64,
    rho: f64,
    eps: f64,
) -> Result<StepOutput> {
    let w = state.weights();
    let w_prev = state.previous();
    step_with(state, x, d, mu, |i, base| {
        base - rho * (sgn(w[i]) / (eps + w_prev[i].abs()))
    })
}

/// lp-pseudo-norm of `v`: `(sum |v_i|^p)^(1/p)`.
pub fn lp_norm(v: &[f64], p: f64) -> f64 {
    v.iter().map(|c| c.abs().powf(p)).sum::<f64>().powf(1.0 / p)
}

/// lp-pseudo-norm penalized LMS update (regularized form). When `w` is the
/// zero vector the factor `||w||_p^(1-p)` and `sgn` both vanish, so the
/// penalty term is exactly zero.
pub fn lp_step(
    state: &WeightState,
    x: &TapDelayLine,
    d: f64,
    mu: f64,
    rho: f64,
    eps: f64,
    p: f64,
) -> Result<StepOutput> {
    let w = state.weights();
    let factor = rho * lp_norm(w, p).powf(1.0 - p);
    step_with(state, x, d, mu, |i, base| {
        base - factor * (sgn(w[i]) / (eps + w[i].abs().powf(1.0 - p)))
    })
}

/// LMS restricted to a known support: off-support coefficients are pinned to
/// zero, on-support coefficients take the standard update.
pub fn oracle_step(
    state: &WeightState,
    x: &TapDelayLine,
    d: f64,
    mu: f64,
    support: &[usize],
) -> Result<StepOutput> {
    if let Some(&bad) = support.iter().find(|&&i| i >= state.len()) {
        return Err(Error::Contract(format!(
            "oracle support index {bad} out of range for length {}",
            state.len()
        )));
    }
    let mut on = vec![false; state.len()];
    for &i in support {
        on[i] = true;
    }
    step_with(state, x, d, mu, |i, base| if on[i] { base } else { 0.0 })
}

/// Dispatch one update according to `params`.
pub fn step(state: &WeightState, x: &TapDelayLine, d: f64, params: &FilterParams) -> Result<StepOutput> {
    let mu = params.mu;
    match &params.variant {
        Variant::Standard => lms_step(state, x, d, mu),
        Variant::Za { rho } => za_step(state, x, d, mu, *rho),
        Variant::Rza { rho, eps } => rza_step(state, x, d, mu, *rho, *eps),
        Variant::Rl1 { rho, eps } => rl1_step(state, x, d, mu, *rho, *eps),
        Variant::Lp { rho, eps, p } => lp_step(state, x, d, mu, *rho, *eps, *p),
        Variant::Oracle { support } => oracle_step(state, x, d, mu, support),
    }
}
