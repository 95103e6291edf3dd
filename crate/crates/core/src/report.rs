//! Experiment reports and their CSV/JSON serializations.
//!
//! A [`Report`] is fully deterministic for a given configuration and seed:
//! it carries no timestamps or machine identifiers, so repeated invocations
//! produce byte-identical files. CSV floats are written with 17 significant
//! digits (`{:.16e}`), which round-trips `f64` exactly; JSON goes through
//! serde_json's shortest-round-trip float formatting.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::ExcessMsePrediction;
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};

/// Bumped when the JSON layout changes.
pub const SCHEMA_VERSION: u32 = 1;

/// One averaged metric trace for one algorithm at one sparsity level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    /// Column label, e.g. `rl1` or `rl1_s4`.
    pub label: String,
    /// Metric name, e.g. `mse` or `excess_mse`.
    pub metric: String,
    pub sparsity: usize,
    /// Ensemble mean per iteration.
    pub values: Vec<f64>,
    /// Sample standard deviation across runs per iteration.
    pub std_dev: Vec<f64>,
    /// Mean of the per-run trailing-window averages; absent for
    /// zero-iteration runs.
    pub steady_state: Option<f64>,
    pub diverged_runs: usize,
}

/// Analysis attachment for one sparsity level (reweighted-l1 estimators and
/// the excess-MSE predictions around them).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisBlock {
    pub sparsity: usize,
    pub eta: f64,
    pub xi_standard: f64,
    pub alpha_prime: f64,
    pub beta_prime: f64,
    pub beta_bound: f64,
    pub xi_rl1_predicted: f64,
    pub rho_star: Option<f64>,
}

impl AnalysisBlock {
    pub fn from_prediction(sparsity: usize, beta_bound: f64, p: &ExcessMsePrediction) -> Self {
        AnalysisBlock {
            sparsity,
            eta: p.eta,
            xi_standard: p.xi_standard,
            alpha_prime: p.alpha_prime,
            beta_prime: p.beta_prime,
            beta_bound,
            xi_rl1_predicted: p.xi_rl1,
            rho_star: p.rho_star,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub seed: u64,
    pub runs: usize,
    pub iterations: usize,
    pub diverged_runs: usize,
    /// Echo of the resolved experiment configuration.
    pub parameters: ExperimentConfig,
}

/// Complete experiment output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub metadata: ReportMetadata,
    pub series: Vec<Series>,
    pub analysis: Vec<AnalysisBlock>,
}

fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

impl Report {
    /// Write the per-iteration series table:
    /// `iteration,<label>_<metric>,...`, one row per iteration.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = Vec::new();
        let mut header = String::from("iteration");
        for s in &self.series {
            header.push(',');
            header.push_str(&s.label);
            header.push('_');
            header.push_str(&s.metric);
        }
        writeln!(out, "{header}").expect("vec write");
        let rows = self.series.iter().map(|s| s.values.len()).max().unwrap_or(0);
        for i in 0..rows {
            let mut row = (i + 1).to_string();
            for s in &self.series {
                row.push(',');
                if let Some(v) = s.values.get(i) {
                    row.push_str(&fmt_float(*v));
                }
            }
            writeln!(out, "{row}").expect("vec write");
        }
        write_file(path, &out)
    }

    /// Write the analysis table (one row per sparsity level). Empty analysis
    /// produces a header-only file.
    pub fn write_analysis_csv(&self, path: &Path) -> Result<()> {
        let mut out = Vec::new();
        writeln!(
            out,
            "sparsity,alpha_prime,beta_prime,beta_bound,eta,xi_standard,xi_rl1_predicted,rho_star"
        )
        .expect("vec write");
        for a in &self.analysis {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                a.sparsity,
                fmt_float(a.alpha_prime),
                fmt_float(a.beta_prime),
                fmt_float(a.beta_bound),
                fmt_float(a.eta),
                fmt_float(a.xi_standard),
                fmt_float(a.xi_rl1_predicted),
                a.rho_star.map(fmt_float).unwrap_or_default(),
            )
            .expect("vec write");
        }
        write_file(path, &out)
    }

    /// Write the full report as pretty-printed JSON.
    pub fn write_json(&self, path: &Path) -> Result<()> {
        let mut out = serde_json::to_vec_pretty(self)
            .map_err(|e| Error::Config(format!("cannot serialize report: {e}")))?;
        out.push(b'\n');
        write_file(path, &out)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("cannot parse report {}: {e}", path.display())))
    }

    /// Labels of series carrying the given metric.
    pub fn series_for_metric(&self, metric: &str) -> Vec<&Series> {
        self.series.iter().filter(|s| s.metric == metric).collect()
    }

    /// Distinct metric names present in the report.
    pub fn metrics(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self.series.iter().map(|s| s.metric.as_str()).collect();
        names.dedup();
        names
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
