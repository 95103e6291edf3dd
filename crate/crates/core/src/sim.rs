//! Seeded Monte-Carlo harness: sparse channel generation, BPSK training
//! streams, single trials, and parallel ensemble averaging.
//!
//! Determinism contract: every random draw in run `i` of an ensemble comes
//! from the stream `(base_seed, i)` of [`SimRng`], so results are identical
//! across thread counts and schedules. Ensemble reductions accumulate runs
//! in fixed-size chunks and then fold the per-chunk partials in chunk order,
//! which pins the floating-point summation tree independently of how rayon
//! distributes the chunks.

use rayon::prelude::*;

use crate::basis::OrthonormalBasis;
use crate::error::{Error, Result};
use crate::filters::{step, FilterParams, TapDelayLine, WeightState};
use crate::linalg::norm2_sq;
use crate::rng::SimRng;

/// Distribution of the nonzero channel taps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TapLaw {
    /// Zero-mean unit-variance Gaussian values.
    GaussianUnit,
    /// +1 or -1 with equal probability.
    PlusMinusOne,
}

/// Domain in which the channel is sparse.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelDomain {
    /// Nonzero taps sit directly in the impulse response.
    Time,
    /// Nonzero coefficients sit in `Psi w`; the generated time-domain channel
    /// is `Psi^T` applied to the sparse domain vector.
    Basis(OrthonormalBasis),
}

/// Generative description of the sparse true channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpec {
    pub len: usize,
    pub sparsity: usize,
    pub tap_law: TapLaw,
    pub domain: ChannelDomain,
    /// Rescale the generated channel to unit l2 norm (for +-1 taps this makes
    /// every nonzero tap +-1/sqrt(S), keeping SNR constant across sparsity
    /// levels).
    pub unit_power: bool,
}

impl ChannelSpec {
    pub fn validate(&self) -> Result<()> {
        if self.len == 0 {
            return Err(Error::Contract("channel length must be >= 1".into()));
        }
        if self.sparsity == 0 || self.sparsity > self.len {
            return Err(Error::Contract(format!(
                "sparsity {} must lie in 1..={}",
                self.sparsity, self.len
            )));
        }
        if let ChannelDomain::Basis(b) = &self.domain {
            if b.dim() != self.len {
                return Err(Error::Contract(format!(
                    "basis dimension {} does not match channel length {}",
                    b.dim(),
                    self.len
                )));
            }
        }
        Ok(())
    }
}

/// Draw a channel realization: exactly `sparsity` nonzero entries at
/// uniformly-random distinct positions in the declared domain, values per
/// `tap_law`, transformed back to the time domain when the domain is a basis.
pub fn gen_channel(spec: &ChannelSpec, rng: &mut SimRng) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut sparse = vec![0.0; spec.len];
    let positions = rng.choose_distinct(spec.len, spec.sparsity);
    for &pos in &positions {
        sparse[pos] = match spec.tap_law {
            TapLaw::GaussianUnit => rng.gaussian(),
            TapLaw::PlusMinusOne => rng.bpsk(),
        };
    }
    if spec.unit_power {
        let norm = norm2_sq(&sparse).sqrt();
        if norm == 0.0 {
            return Err(Error::Contract("cannot normalize an all-zero channel".into()));
        }
        for v in &mut sparse {
            *v /= norm;
        }
    }
    Ok(match &spec.domain {
        ChannelDomain::Time => sparse,
        ChannelDomain::Basis(psi) => psi.inverse(&sparse),
    })
}

/// i.i.d. +-1 training stream of length `len`.
pub fn gen_bpsk(len: usize, rng: &mut SimRng) -> Vec<f64> {
    (0..len).map(|_| rng.bpsk()).collect()
}

/// Additive-noise description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSpec {
    /// Fixed variance sigma_n^2.
    FixedVariance(f64),
    /// SNR in dB relative to the filter-output power of the given channel
    /// under unit-power input.
    SnrDb(f64),
}

impl NoiseSpec {
    /// Noise variance for a concrete channel realization.
    pub fn variance_for(&self, channel: &[f64]) -> Result<f64> {
        match *self {
            NoiseSpec::FixedVariance(v) => {
                if !v.is_finite() || v < 0.0 {
                    Err(Error::Contract(format!("noise variance must be >= 0, got {v}")))
                } else {
                    Ok(v)
                }
            }
            NoiseSpec::SnrDb(db) => sigma_from_snr(db, channel),
        }
    }
}

/// `sigma_n^2 = ||w||^2 * E[x^2] * 10^(-snr/10)` with `E[x^2] = 1` for BPSK.
pub fn sigma_from_snr(snr_db: f64, channel: &[f64]) -> Result<f64> {
    let power = norm2_sq(channel);
    if power == 0.0 {
        return Err(Error::Contract("SNR is undefined for an all-zero channel".into()));
    }
    Ok(power * 10f64.powf(-snr_db / 10.0))
}

/// Coefficient norm above which a trial aborts with a divergence error.
pub const DIVERGENCE_NORM: f64 = 1e6;

/// Snapshot of the estimate pair at a requested iteration, with the true
/// channel it was chasing. Feeds the analysis estimators.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotSample {
    pub iteration: usize,
    /// w_k
    pub current: Vec<f64>,
    /// w_{k-1}
    pub previous: Vec<f64>,
    /// true channel w
    pub channel: Vec<f64>,
}

/// Per-iteration record of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    /// Squared coefficient deviation `||w_k - w||^2` after each update.
    pub msd: Vec<f64>,
    /// Prediction error e_k at each update.
    pub errors: Vec<f64>,
    pub snapshot: Option<SnapshotSample>,
    pub final_weights: Vec<f64>,
}

/// Inputs for a single trial.
#[derive(Debug, Clone)]
pub struct TrialSetup<'a> {
    pub channel: &'a [f64],
    pub params: &'a FilterParams,
    pub basis: Option<&'a OrthonormalBasis>,
    pub noise_variance: f64,
    pub iterations: usize,
    /// Take a `(w_k, w_{k-1})` snapshot after this many updates.
    pub snapshot_iteration: Option<usize>,
}

fn apply_step(
    state: &WeightState,
    x: &TapDelayLine,
    d: f64,
    params: &FilterParams,
    basis: Option<&OrthonormalBasis>,
) -> Result<crate::filters::StepOutput> {
    use crate::basis::{lp_step_basis, rl1_step_basis, za_step_basis};
    use crate::filters::Variant;
    match basis {
        None => step(state, x, d, params),
        Some(psi) => match &params.variant {
            Variant::Za { rho } => za_step_basis(state, x, d, params.mu, *rho, psi),
            Variant::Rl1 { rho, eps } => rl1_step_basis(state, x, d, params.mu, *rho, *eps, psi),
            Variant::Lp { rho, eps, p } => {
                lp_step_basis(state, x, d, params.mu, *rho, *eps, *p, psi)
            }
            // Standard and oracle have no penalty to transform.
            _ => step(state, x, d, params),
        },
    }
}

/// Simulate `d_k = w.x_k + n_k` and run the configured update rule, starting
/// from zero weights and a zero-filled delay line. Deterministic given `rng`.
pub fn run_trial(setup: &TrialSetup<'_>, rng: &mut SimRng) -> Result<TrialRecord> {
    let n = setup.channel.len();
    if n == 0 {
        return Err(Error::Contract("channel must be non-empty".into()));
    }
    setup.params.validate_for_len(n)?;
    if let Some(k) = setup.snapshot_iteration {
        if k > setup.iterations {
            return Err(Error::Contract(format!(
                "snapshot iteration {k} exceeds trial length {}",
                setup.iterations
            )));
        }
    }
    let sigma = setup.noise_variance.sqrt();
    let mut state = WeightState::zeros(n);
    let mut x = TapDelayLine::zeros(n);
    let mut msd = Vec::with_capacity(setup.iterations);
    let mut errors = Vec::with_capacity(setup.iterations);
    let mut snapshot = None;
    if setup.snapshot_iteration == Some(0) {
        snapshot = Some(make_snapshot(0, &state, setup.channel));
    }
    for k in 0..setup.iterations {
        x.push(rng.bpsk());
        let clean: f64 = setup.channel.iter().zip(x.samples()).map(|(w, s)| w * s).sum();
        let d = clean + sigma * rng.gaussian();
        let out = apply_step(&state, &x, d, setup.params, setup.basis)?;
        state = out.next;
        errors.push(out.error);
        let dev: f64 = state
            .weights()
            .iter()
            .zip(setup.channel)
            .map(|(w, t)| (w - t) * (w - t))
            .sum();
        msd.push(dev);
        if state.norm2() > DIVERGENCE_NORM {
            return Err(Error::Divergence {
                iteration: k + 1,
                norm: state.norm2(),
            });
        }
        if setup.snapshot_iteration == Some(k + 1) {
            snapshot = Some(make_snapshot(k + 1, &state, setup.channel));
        }
    }
    Ok(TrialRecord {
        msd,
        errors,
        snapshot,
        final_weights: state.weights().to_vec(),
    })
}

fn make_snapshot(iteration: usize, state: &WeightState, channel: &[f64]) -> SnapshotSample {
    SnapshotSample {
        iteration,
        current: state.weights().to_vec(),
        previous: state.previous().to_vec(),
        channel: channel.to_vec(),
    }
}

/// One Monte-Carlo ensemble: a channel spec, a filter, and run bookkeeping.
#[derive(Debug, Clone)]
pub struct EnsembleConfig<'a> {
    pub channel: &'a ChannelSpec,
    pub params: &'a FilterParams,
    pub basis: Option<&'a OrthonormalBasis>,
    pub noise: NoiseSpec,
    pub iterations: usize,
    pub runs: usize,
    pub base_seed: u64,
    pub snapshot_iteration: Option<usize>,
    /// Trailing fraction of the iteration span averaged into the per-run
    /// steady-state value.
    pub steady_window: f64,
    /// Redraw the channel every run (the usual mode). When false the channel
    /// is drawn once from a dedicated stream and shared by all runs.
    pub redraw_channel: bool,
}

/// Stream index reserved for the shared channel draw in fixed-channel mode.
const FIXED_CHANNEL_STREAM: u64 = u64::MAX;

/// Iteration-wise ensemble averages plus per-run reductions.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloResult {
    pub runs: usize,
    pub completed_runs: usize,
    pub diverged_runs: usize,
    pub base_seed: u64,
    /// Arithmetic mean of the squared deviation at each iteration.
    pub mean_msd: Vec<f64>,
    /// Sample standard deviation across runs at each iteration.
    pub std_msd: Vec<f64>,
    /// Per completed run: mean msd over the trailing steady-state window
    /// (empty for zero-iteration runs).
    pub steady_msd: Vec<f64>,
    /// Per completed run, when a snapshot iteration was requested.
    pub snapshots: Vec<SnapshotSample>,
}

impl MonteCarloResult {
    /// Ensemble mean of the per-run steady-state values; `None` when no
    /// iterations were run.
    pub fn steady_state_mean(&self) -> Option<f64> {
        if self.steady_msd.is_empty() {
            return None;
        }
        Some(self.steady_msd.iter().sum::<f64>() / self.steady_msd.len() as f64)
    }
}

struct ChunkAccum {
    sum: Vec<f64>,
    sumsq: Vec<f64>,
    steady: Vec<f64>,
    snapshots: Vec<SnapshotSample>,
    diverged: usize,
    completed: usize,
}

/// Fixed chunk length for the deterministic reduction tree.
const CHUNK_RUNS: usize = 32;

/// Run `cfg.runs` independent seeded trials and average them. Diverged runs
/// are excluded from every aggregate and counted in `diverged_runs`; any
/// other error aborts the ensemble.
pub fn run_monte_carlo(cfg: &EnsembleConfig<'_>) -> Result<MonteCarloResult> {
    if cfg.runs == 0 {
        return Err(Error::Contract("ensemble needs at least one run".into()));
    }
    if cfg.steady_window.is_nan() || cfg.steady_window <= 0.0 || cfg.steady_window > 1.0 {
        return Err(Error::Contract(format!(
            "steady window fraction must lie in (0, 1], got {}",
            cfg.steady_window
        )));
    }
    cfg.channel.validate()?;
    cfg.params.validate_for_len(cfg.channel.len)?;

    let fixed_channel = if cfg.redraw_channel {
        None
    } else {
        let mut rng = SimRng::new(cfg.base_seed, FIXED_CHANNEL_STREAM);
        Some(gen_channel(cfg.channel, &mut rng)?)
    };

    let chunk_count = cfg.runs.div_ceil(CHUNK_RUNS);
    let chunks: Vec<Result<ChunkAccum>> = (0..chunk_count)
        .into_par_iter()
        .map(|chunk_idx| {
            let lo = chunk_idx * CHUNK_RUNS;
            let hi = ((chunk_idx + 1) * CHUNK_RUNS).min(cfg.runs);
            let mut acc = ChunkAccum {
                sum: vec![0.0; cfg.iterations],
                sumsq: vec![0.0; cfg.iterations],
                steady: Vec::new(),
                snapshots: Vec::new(),
                diverged: 0,
                completed: 0,
            };
            for run in lo..hi {
                let mut rng = SimRng::new(cfg.base_seed, run as u64);
                let channel = match &fixed_channel {
                    Some(c) => c.clone(),
                    None => gen_channel(cfg.channel, &mut rng)?,
                };
                let noise_variance = cfg.noise.variance_for(&channel)?;
                // The oracle is told each realization's true support.
                let oracle_params;
                let params = match &cfg.params.variant {
                    crate::filters::Variant::Oracle { .. } => {
                        let support: Vec<usize> = channel
                            .iter()
                            .enumerate()
                            .filter(|(_, v)| **v != 0.0)
                            .map(|(i, _)| i)
                            .collect();
                        oracle_params = FilterParams::new(
                            cfg.params.mu,
                            crate::filters::Variant::Oracle { support },
                        )?;
                        &oracle_params
                    }
                    _ => cfg.params,
                };
                let setup = TrialSetup {
                    channel: &channel,
                    params,
                    basis: cfg.basis,
                    noise_variance,
                    iterations: cfg.iterations,
                    snapshot_iteration: cfg.snapshot_iteration,
                };
                match run_trial(&setup, &mut rng) {
                    Ok(record) => {
                        for (i, v) in record.msd.iter().enumerate() {
                            acc.sum[i] += v;
                            acc.sumsq[i] += v * v;
                        }
                        if !record.msd.is_empty() {
                            acc.steady.push(steady_mean(&record.msd, cfg.steady_window));
                        }
                        if let Some(s) = record.snapshot {
                            acc.snapshots.push(s);
                        }
                        acc.completed += 1;
                    }
                    Err(Error::Divergence { .. }) => acc.diverged += 1,
                    Err(other) => return Err(other),
                }
            }
            Ok(acc)
        })
        .collect();

    let mut sum = vec![0.0; cfg.iterations];
    let mut sumsq = vec![0.0; cfg.iterations];
    let mut steady = Vec::with_capacity(cfg.runs);
    let mut snapshots = Vec::new();
    let mut diverged = 0;
    let mut completed = 0;
    for chunk in chunks {
        let chunk = chunk?;
        for i in 0..cfg.iterations {
            sum[i] += chunk.sum[i];
            sumsq[i] += chunk.sumsq[i];
        }
        steady.extend(chunk.steady);
        snapshots.extend(chunk.snapshots);
        diverged += chunk.diverged;
        completed += chunk.completed;
    }
    if completed == 0 {
        return Err(Error::Contract(format!(
            "all {} runs diverged; nothing to average",
            cfg.runs
        )));
    }

    let c = completed as f64;
    let mean_msd: Vec<f64> = sum.iter().map(|s| s / c).collect();
    let std_msd: Vec<f64> = sum
        .iter()
        .zip(&sumsq)
        .map(|(s, ss)| {
            if completed < 2 {
                0.0
            } else {
                (((ss - s * s / c) / (c - 1.0)).max(0.0)).sqrt()
            }
        })
        .collect();

    Ok(MonteCarloResult {
        runs: cfg.runs,
        completed_runs: completed,
        diverged_runs: diverged,
        base_seed: cfg.base_seed,
        mean_msd,
        std_msd,
        steady_msd: steady,
        snapshots,
    })
}

/// Mean of the trailing `window` fraction of a series (at least one element).
pub fn steady_mean(series: &[f64], window: f64) -> f64 {
    if series.is_empty() {
        return f64::NAN;
    }
    let keep = ((series.len() as f64 * window).ceil() as usize).clamp(1, series.len());
    let tail = &series[series.len() - keep..];
    tail.iter().sum::<f64>() / tail.len() as f64
}
