//! Named experiment presets and the experiment runner.
//!
//! Each preset is a complete experiment: channel model, noise level,
//! algorithm roster, and run bookkeeping.
//!
//! - `example1_s1`, `example1_s4`: length-16 time-sparse channel with unit
//!   Gaussian taps, all six algorithms, SNR 10 dB by default (20 dB via
//!   `--set snr_db=20`).
//! - `example2_dct`: DCT-sparse channel with +-1 domain coefficients,
//!   basis-generalized ZA / reweighted-l1 / lp against standard LMS. At
//!   20 dB SNR the rl1 and lp penalty weights are halved.
//! - `example3_sweep`: excess-MSE comparison of standard vs reweighted-l1
//!   LMS over sparsity levels 2, 4, 6, 8 at fixed noise variance 0.01.
//! - `table1_alpha`: the alpha' sparsity sweep (S = 1..16) at rho_r = 5e-4,
//!   snapshots at iteration 250, unit-power +-1/sqrt(S) taps.
//!
//! Curve presets default to 2000 Monte-Carlo runs to keep desk-scale wall
//! time; pass `--runs 10000` for smoother curves.

use rayon::prelude::*;

use crate::analysis::{
    beta_prime_bound, estimate_alpha_prime, estimate_beta_prime, eta, xi_rl1_predicted, Covariance,
};
use crate::config::{
    AlgorithmConfig, DomainConfig, ExperimentConfig, NoiseConfig, TapLawConfig, VariantConfig,
};
use crate::error::{Error, Result};
use crate::report::{AnalysisBlock, Report, ReportMetadata, Series, SCHEMA_VERSION};
use crate::sim::{run_monte_carlo, EnsembleConfig, MonteCarloResult, SnapshotSample};

/// Default base seed for presets; override with `--seed`.
pub const DEFAULT_SEED: u64 = 42;

/// Default Monte-Carlo run count for the curve presets.
pub const DEFAULT_CURVE_RUNS: usize = 2000;

/// Run count for the alpha' table (stabilizes the estimate well inside the
/// reproduction tolerance).
pub const TABLE1_RUNS: usize = 5000;

pub const PRESET_NAMES: [&str; 5] = [
    "example1_s1",
    "example1_s4",
    "example2_dct",
    "example3_sweep",
    "table1_alpha",
];

const MU: f64 = 0.05;
const RHO_ZA: f64 = 5e-4;
const RHO_RZA: f64 = 4e-3;
const EPS_RZA: f64 = 25.0;
const RHO_R_CURVES: f64 = 2e-4;
const RHO_R_TABLE1: f64 = 5e-4;
const EPS_R: f64 = 0.05;
const RHO_P: f64 = 2e-4;
const EPS_P: f64 = 0.05;
const LP_P: f64 = 0.5;

fn algo(label: &str, variant: VariantConfig) -> AlgorithmConfig {
    AlgorithmConfig {
        label: label.into(),
        variant,
        mu: MU,
        rho: None,
        eps: None,
        p: None,
        in_basis: false,
    }
}

fn full_algorithm_set(in_basis: bool, with_rza_oracle: bool) -> Vec<AlgorithmConfig> {
    let mut algos = vec![algo("lms", VariantConfig::Standard)];
    algos.push(AlgorithmConfig {
        rho: Some(RHO_ZA),
        in_basis,
        ..algo("za", VariantConfig::Za)
    });
    if with_rza_oracle {
        algos.push(AlgorithmConfig {
            rho: Some(RHO_RZA),
            eps: Some(EPS_RZA),
            ..algo("rza", VariantConfig::Rza)
        });
    }
    algos.push(AlgorithmConfig {
        rho: Some(RHO_R_CURVES),
        eps: Some(EPS_R),
        in_basis,
        ..algo("rl1", VariantConfig::Rl1)
    });
    algos.push(AlgorithmConfig {
        rho: Some(RHO_P),
        eps: Some(EPS_P),
        p: Some(LP_P),
        in_basis,
        ..algo("lp", VariantConfig::Lp)
    });
    if with_rza_oracle {
        algos.push(algo("oracle", VariantConfig::Oracle));
    }
    algos
}

fn example1(name: &str, sparsity: usize) -> ExperimentConfig {
    ExperimentConfig {
        name: name.into(),
        n: 16,
        sparsity_levels: vec![sparsity],
        tap_law: TapLawConfig::GaussianUnit,
        unit_power: false,
        channel_domain: DomainConfig::TIME,
        noise: NoiseConfig::SnrDb(10.0),
        iterations: 1000,
        runs: DEFAULT_CURVE_RUNS,
        seed: DEFAULT_SEED,
        snapshot_iteration: None,
        steady_window: 0.2,
        redraw_channel: true,
        metric: "mse".into(),
        algorithms: full_algorithm_set(false, true),
    }
}

fn example2_dct() -> ExperimentConfig {
    ExperimentConfig {
        name: "example2_dct".into(),
        n: 16,
        sparsity_levels: vec![2],
        tap_law: TapLawConfig::PlusMinusOne,
        unit_power: false,
        channel_domain: DomainConfig::DCT,
        noise: NoiseConfig::SnrDb(10.0),
        iterations: 1000,
        runs: DEFAULT_CURVE_RUNS,
        seed: DEFAULT_SEED,
        snapshot_iteration: None,
        steady_window: 0.2,
        redraw_channel: true,
        metric: "mse".into(),
        // RZA-LMS has no basis-domain update rule, so the DCT preset
        // compares the three basis-generalized penalties against standard
        // LMS.
        algorithms: full_algorithm_set(true, false),
    }
}

fn example3_sweep() -> ExperimentConfig {
    ExperimentConfig {
        name: "example3_sweep".into(),
        n: 16,
        sparsity_levels: vec![2, 4, 6, 8],
        tap_law: TapLawConfig::PlusMinusOne,
        unit_power: false,
        channel_domain: DomainConfig::TIME,
        noise: NoiseConfig::Variance(0.01),
        iterations: 500,
        runs: DEFAULT_CURVE_RUNS,
        seed: DEFAULT_SEED,
        snapshot_iteration: Some(150),
        steady_window: 0.2,
        redraw_channel: true,
        metric: "excess_mse".into(),
        algorithms: vec![
            algo("lms", VariantConfig::Standard),
            AlgorithmConfig {
                rho: Some(RHO_R_CURVES),
                eps: Some(EPS_R),
                ..algo("rl1", VariantConfig::Rl1)
            },
        ],
    }
}

fn table1_alpha() -> ExperimentConfig {
    ExperimentConfig {
        name: "table1_alpha".into(),
        n: 16,
        sparsity_levels: (1..=16).collect(),
        tap_law: TapLawConfig::PlusMinusOne,
        // Unit channel power (taps +-1/sqrt(S)) keeps SNR constant across
        // the sweep, so alpha' varies with sparsity alone.
        unit_power: true,
        channel_domain: DomainConfig::TIME,
        noise: NoiseConfig::Variance(0.01),
        iterations: 250,
        runs: TABLE1_RUNS,
        seed: DEFAULT_SEED,
        snapshot_iteration: Some(250),
        steady_window: 0.2,
        redraw_channel: true,
        metric: "excess_mse".into(),
        algorithms: vec![AlgorithmConfig {
            rho: Some(RHO_R_TABLE1),
            eps: Some(EPS_R),
            ..algo("rl1", VariantConfig::Rl1)
        }],
    }
}

/// Base configuration of a preset, before overrides.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    match name {
        "example1_s1" => Ok(example1("example1_s1", 1)),
        "example1_s4" => Ok(example1("example1_s4", 4)),
        "example2_dct" => Ok(example2_dct()),
        "example3_sweep" => Ok(example3_sweep()),
        "table1_alpha" => Ok(table1_alpha()),
        other => Err(Error::Config(format!(
            "unknown preset '{other}'; valid presets: {}",
            PRESET_NAMES.join(", ")
        ))),
    }
}

/// Preset plus `key=value` overrides.
///
/// For `example2_dct`, an `snr_db=20` override halves rho for the rl1 and lp
/// penalties (the preset's 20 dB parameterization) before any explicit rho
/// overrides are applied, so `rho_r=...` still wins if given.
pub fn resolve_preset(name: &str, overrides: &[(String, String)]) -> Result<ExperimentConfig> {
    let mut config = preset(name)?;
    if name == "example2_dct" {
        let snr_20 = overrides
            .iter()
            .rev()
            .find(|(k, _)| k == "snr_db")
            .map(|(_, v)| v.parse::<f64>().unwrap_or(f64::NAN) == 20.0)
            .unwrap_or(false);
        if snr_20 {
            for algo in &mut config.algorithms {
                if matches!(algo.variant, VariantConfig::Rl1 | VariantConfig::Lp | VariantConfig::Rza)
                {
                    algo.rho = algo.rho.map(|r| r / 2.0);
                }
            }
        }
    }
    for (key, value) in overrides {
        config.apply_override(key, value)?;
    }
    config.validate()?;
    Ok(config)
}

/// Run a resolved experiment: every algorithm at every sparsity level, with
/// paired per-run randomness (all algorithms see identical channels, inputs,
/// and noise at a given run index).
pub fn run_experiment(config: &ExperimentConfig) -> Result<Report> {
    run_experiment_named(config, None)
}

/// Run a preset by name.
pub fn run_preset(name: &str, overrides: &[(String, String)]) -> Result<Report> {
    let config = resolve_preset(name, overrides)?;
    run_experiment_named(&config, Some(name.to_string()))
}

fn run_experiment_named(config: &ExperimentConfig, preset: Option<String>) -> Result<Report> {
    config.validate()?;
    let multi_sparsity = config.sparsity_levels.len() > 1;
    let noise = config.noise_spec();

    // (sparsity, algorithm) jobs, parallelized one level above the ensemble
    // chunks; ordering of the output is fixed by the job list.
    struct Job<'c> {
        sparsity: usize,
        algo: &'c AlgorithmConfig,
    }
    let jobs: Vec<Job> = config
        .sparsity_levels
        .iter()
        .flat_map(|&s| config.algorithms.iter().map(move |algo| Job { sparsity: s, algo }))
        .collect();

    let outcomes: Vec<Result<(MonteCarloResult, Vec<SnapshotSample>)>> = jobs
        .par_iter()
        .map(|job| {
            let channel_spec = config.channel_spec(job.sparsity)?;
            let params = job.algo.filter_params()?;
            let basis = if job.algo.in_basis {
                config.channel_domain.resolve(config.n)?
            } else {
                None
            };
            let ensemble = EnsembleConfig {
                channel: &channel_spec,
                params: &params,
                basis: basis.as_ref(),
                noise,
                iterations: config.iterations,
                runs: config.runs,
                base_seed: config.seed,
                snapshot_iteration: config.snapshot_iteration,
                steady_window: config.steady_window,
                redraw_channel: config.redraw_channel,
            };
            let mut mc = run_monte_carlo(&ensemble)?;
            let snapshots = std::mem::take(&mut mc.snapshots);
            Ok((mc, snapshots))
        })
        .collect();

    let mut series = Vec::with_capacity(jobs.len());
    let mut diverged_total = 0;
    // Snapshot ensembles for the first rl1 algorithm at each sparsity level.
    let mut rl1_snapshots: Vec<(usize, &AlgorithmConfig, Vec<SnapshotSample>)> = Vec::new();
    for (job, outcome) in jobs.iter().zip(outcomes) {
        let (mc, snapshots) = outcome?;
        diverged_total += mc.diverged_runs;
        let label = if multi_sparsity {
            format!("{}_s{}", job.algo.label, job.sparsity)
        } else {
            job.algo.label.clone()
        };
        if job.algo.variant == VariantConfig::Rl1
            && !snapshots.is_empty()
            && !rl1_snapshots.iter().any(|(s, _, _)| *s == job.sparsity)
        {
            rl1_snapshots.push((job.sparsity, job.algo, snapshots));
        }
        series.push(Series {
            label,
            metric: config.metric.clone(),
            sparsity: job.sparsity,
            values: mc.mean_msd.clone(),
            std_dev: mc.std_msd.clone(),
            steady_state: mc.steady_state_mean(),
            diverged_runs: mc.diverged_runs,
        });
    }

    // Analysis attaches when the noise level is a fixed variance (BPSK input
    // gives R = I) and rl1 snapshots exist.
    let mut analysis = Vec::new();
    if let NoiseConfig::Variance(sigma2) = config.noise {
        let r = Covariance::identity(config.n);
        for (sparsity, algo, snapshots) in &rl1_snapshots {
            let (rho, eps) = (algo.rho.unwrap(), algo.eps.unwrap());
            let eta_value = eta(algo.mu, &r)?;
            let alpha = estimate_alpha_prime(snapshots, eps)?;
            let beta = estimate_beta_prime(snapshots, eps, algo.mu, &r)?;
            let bound = beta_prime_bound(config.n, eps, algo.mu, &r)?;
            let prediction = xi_rl1_predicted(eta_value, sigma2, alpha, beta, rho, algo.mu)?;
            analysis.push(AnalysisBlock::from_prediction(*sparsity, bound, &prediction));
        }
    }

    Ok(Report {
        schema_version: SCHEMA_VERSION,
        metadata: ReportMetadata {
            name: config.name.clone(),
            preset,
            seed: config.seed,
            runs: config.runs,
            iterations: config.iterations,
            diverged_runs: diverged_total,
            parameters: config.clone(),
        },
        series,
        analysis,
    })
}
