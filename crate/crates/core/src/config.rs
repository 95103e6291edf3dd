//! Serializable experiment descriptions.
//!
//! An [`ExperimentConfig`] is the file- and CLI-facing description of a
//! Monte-Carlo experiment: channel, noise, run bookkeeping, and the list of
//! algorithms to compare. It loads from TOML, echoes into JSON reports, and
//! resolves into the runtime types consumed by the simulation harness.
//!
//! TOML schema (all keys shown; `sparsity_levels` holds one entry for a
//! single-sparsity experiment):
//!
//! ```toml
//! name = "custom"
//! n = 16
//! sparsity_levels = [4]
//! tap_law = "plus_minus_one"        # or "gaussian_unit"
//! unit_power = false
//! channel_domain = "time"           # or "dct", or { file = "basis.csv" }
//! iterations = 1000
//! runs = 2000
//! seed = 42
//! steady_window = 0.2
//! redraw_channel = true
//! metric = "mse"
//! # snapshot_iteration = 250        # optional
//!
//! [noise]
//! snr_db = 10.0                     # or: variance = 0.01
//!
//! [[algorithms]]
//! label = "lms"
//! variant = "standard"
//! mu = 0.05
//!
//! [[algorithms]]
//! label = "rl1"
//! variant = "rl1"
//! mu = 0.05
//! rho = 2e-4
//! eps = 0.05
//! in_basis = false                  # apply the penalty in channel_domain's basis
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::basis::OrthonormalBasis;
use crate::error::{Error, Result};
use crate::filters::{FilterParams, Variant};
use crate::sim::{ChannelDomain, ChannelSpec, NoiseSpec, TapLaw};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TapLawConfig {
    GaussianUnit,
    PlusMinusOne,
}

impl From<TapLawConfig> for TapLaw {
    fn from(v: TapLawConfig) -> TapLaw {
        match v {
            TapLawConfig::GaussianUnit => TapLaw::GaussianUnit,
            TapLawConfig::PlusMinusOne => TapLaw::PlusMinusOne,
        }
    }
}

/// Sparsity-domain selector: identity (time), DCT, or a matrix file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", untagged)]
pub enum DomainConfig {
    Named(NamedDomain),
    File { file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedDomain {
    Time,
    Dct,
}

impl DomainConfig {
    pub const TIME: DomainConfig = DomainConfig::Named(NamedDomain::Time);
    pub const DCT: DomainConfig = DomainConfig::Named(NamedDomain::Dct);

    /// Resolve to a basis; `None` means the time domain / identity.
    pub fn resolve(&self, n: usize) -> Result<Option<OrthonormalBasis>> {
        match self {
            DomainConfig::Named(NamedDomain::Time) => Ok(None),
            DomainConfig::Named(NamedDomain::Dct) => Ok(Some(OrthonormalBasis::dct(n)?)),
            DomainConfig::File { file } => {
                let basis = OrthonormalBasis::from_csv_file(file)?;
                if basis.dim() != n {
                    return Err(Error::InvalidBasis(format!(
                        "basis file {} has dimension {}, experiment needs {n}",
                        file.display(),
                        basis.dim()
                    )));
                }
                Ok(Some(basis))
            }
        }
    }
}

/// Additive noise: exactly one of the two conventions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseConfig {
    Variance(f64),
    SnrDb(f64),
}

impl From<NoiseConfig> for NoiseSpec {
    fn from(v: NoiseConfig) -> NoiseSpec {
        match v {
            NoiseConfig::Variance(var) => NoiseSpec::FixedVariance(var),
            NoiseConfig::SnrDb(db) => NoiseSpec::SnrDb(db),
        }
    }
}

/// One algorithm entry: a label for report columns plus filter parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmConfig {
    pub label: String,
    pub variant: VariantConfig,
    pub mu: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Apply the penalty in the experiment's sparsity basis instead of the
    /// time domain. Ignored for `standard` and `oracle`.
    #[serde(default)]
    pub in_basis: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantConfig {
    Standard,
    Za,
    Rza,
    Rl1,
    Lp,
    /// Support is the generated channel's true support, filled per run.
    Oracle,
}

impl AlgorithmConfig {
    fn require_rho(&self) -> Result<f64> {
        self.rho.ok_or_else(|| {
            Error::Config(format!("algorithm '{}' needs a rho value", self.label))
        })
    }

    fn require_eps(&self) -> Result<f64> {
        self.eps.ok_or_else(|| {
            Error::Config(format!("algorithm '{}' needs an eps value", self.label))
        })
    }

    /// Build filter parameters. Oracle support is injected per run by the
    /// harness, so it resolves to an empty support here.
    pub fn filter_params(&self) -> Result<FilterParams> {
        let variant = match self.variant {
            VariantConfig::Standard => Variant::Standard,
            VariantConfig::Za => Variant::Za { rho: self.require_rho()? },
            VariantConfig::Rza => Variant::Rza { rho: self.require_rho()?, eps: self.require_eps()? },
            VariantConfig::Rl1 => Variant::Rl1 { rho: self.require_rho()?, eps: self.require_eps()? },
            VariantConfig::Lp => Variant::Lp {
                rho: self.require_rho()?,
                eps: self.require_eps()?,
                p: self.p.ok_or_else(|| {
                    Error::Config(format!("algorithm '{}' needs a p value", self.label))
                })?,
            },
            VariantConfig::Oracle => Variant::Oracle { support: Vec::new() },
        };
        FilterParams::new(self.mu, variant)
    }
}

/// Full experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub n: usize,
    pub sparsity_levels: Vec<usize>,
    pub tap_law: TapLawConfig,
    #[serde(default)]
    pub unit_power: bool,
    pub channel_domain: DomainConfig,
    pub noise: NoiseConfig,
    pub iterations: usize,
    pub runs: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_iteration: Option<usize>,
    #[serde(default = "default_steady_window")]
    pub steady_window: f64,
    #[serde(default = "default_true")]
    pub redraw_channel: bool,
    /// Metric label used in report columns ("mse" or "excess_mse"; both are
    /// the squared coefficient deviation, named per context).
    pub metric: String,
    pub algorithms: Vec<AlgorithmConfig>,
}

fn default_steady_window() -> f64 {
    0.2
}

fn default_true() -> bool {
    true
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sparsity_levels.is_empty() {
            return Err(Error::Config("sparsity_levels must not be empty".into()));
        }
        for &s in &self.sparsity_levels {
            if s == 0 || s > self.n {
                return Err(Error::Config(format!(
                    "sparsity {s} out of range 1..={}",
                    self.n
                )));
            }
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("at least one algorithm is required".into()));
        }
        for algo in &self.algorithms {
            algo.filter_params()?;
        }
        if let Some(k) = self.snapshot_iteration {
            if k > self.iterations {
                return Err(Error::Config(format!(
                    "snapshot_iteration {k} exceeds iterations {}",
                    self.iterations
                )));
            }
        }
        Ok(())
    }

    /// Channel spec for one sparsity level.
    pub fn channel_spec(&self, sparsity: usize) -> Result<ChannelSpec> {
        let domain = match self.channel_domain.resolve(self.n)? {
            None => ChannelDomain::Time,
            Some(b) => ChannelDomain::Basis(b),
        };
        Ok(ChannelSpec {
            len: self.n,
            sparsity,
            tap_law: self.tap_law.into(),
            domain,
            unit_power: self.unit_power,
        })
    }

    pub fn noise_spec(&self) -> NoiseSpec {
        self.noise.into()
    }

    /// Parse a TOML experiment file.
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let config: ExperimentConfig = toml::from_str(&text)
            .map_err(|e| Error::Config(format!("cannot parse {}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("experiment config serializes")
    }

    /// Apply one `key=value` override. Unknown keys list the valid ones.
    pub fn apply_override(&mut self, key: &str, value: &str) -> Result<()> {
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value.parse().map_err(|_| {
                Error::Config(format!("cannot parse '{value}' as a value for '{key}'"))
            })
        }
        match key {
            "seed" => self.seed = parse(key, value)?,
            "runs" => self.runs = parse(key, value)?,
            "iterations" => self.iterations = parse(key, value)?,
            "snapshot_iteration" => self.snapshot_iteration = Some(parse(key, value)?),
            "steady_window" => self.steady_window = parse(key, value)?,
            "unit_power" => self.unit_power = parse(key, value)?,
            "redraw_channel" => self.redraw_channel = parse(key, value)?,
            "sparsity" => self.sparsity_levels = vec![parse(key, value)?],
            "snr_db" => self.noise = NoiseConfig::SnrDb(parse(key, value)?),
            "sigma2" => self.noise = NoiseConfig::Variance(parse(key, value)?),
            "mu" => {
                let mu = parse(key, value)?;
                for algo in &mut self.algorithms {
                    algo.mu = mu;
                }
            }
            "rho_za" => self.set_rho(VariantConfig::Za, parse(key, value)?)?,
            "rho_rza" => self.set_rho(VariantConfig::Rza, parse(key, value)?)?,
            "rho_r" => self.set_rho(VariantConfig::Rl1, parse(key, value)?)?,
            "rho_p" => self.set_rho(VariantConfig::Lp, parse(key, value)?)?,
            "eps_rza" => self.set_eps(VariantConfig::Rza, parse(key, value)?)?,
            "eps_r" => self.set_eps(VariantConfig::Rl1, parse(key, value)?)?,
            "eps_p" => self.set_eps(VariantConfig::Lp, parse(key, value)?)?,
            "p" => {
                for algo in &mut self.algorithms {
                    if algo.variant == VariantConfig::Lp {
                        algo.p = Some(parse(key, value)?);
                    }
                }
            }
            _ => {
                return Err(Error::Config(format!(
                    "unknown override key '{key}'; valid keys: seed, runs, iterations, \
                     snapshot_iteration, steady_window, unit_power, redraw_channel, sparsity, \
                     snr_db, sigma2, mu, rho_za, rho_rza, rho_r, rho_p, eps_rza, eps_r, eps_p, p"
                )))
            }
        }
        Ok(())
    }

    fn set_rho(&mut self, variant: VariantConfig, rho: f64) -> Result<()> {
        let mut touched = false;
        for algo in &mut self.algorithms {
            if algo.variant == variant {
                algo.rho = Some(rho);
                touched = true;
            }
        }
        if touched {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "no {variant:?} algorithm in this experiment to apply the override to"
            )))
        }
    }

    fn set_eps(&mut self, variant: VariantConfig, eps: f64) -> Result<()> {
        let mut touched = false;
        for algo in &mut self.algorithms {
            if algo.variant == variant {
                algo.eps = Some(eps);
                touched = true;
            }
        }
        if touched {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "no {variant:?} algorithm in this experiment to apply the override to"
            )))
        }
    }
}
