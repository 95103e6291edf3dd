//! Sparse adaptive filtering with penalized LMS variants.
//!
//! This crate implements a family of stochastic-gradient channel estimators
//! built around the reweighted l1-norm penalized LMS algorithm, together
//! with the steady-state excess-MSE analysis that predicts when the penalty
//! helps, and a fully seeded Monte-Carlo harness for running the
//! comparisons.
//!
//! Layout:
//!
//! - [`filters`]: the six single-sample update rules (standard, ZA, RZA,
//!   reweighted-l1, lp, oracle) as pure state transitions.
//! - [`basis`]: orthonormal sparsity bases (identity, DCT, custom) and the
//!   basis-generalized penalty rules.
//! - [`sim`]: channel/noise generation, trials, and deterministic parallel
//!   Monte-Carlo ensembles.
//! - [`analysis`]: excess-MSE theory (eta, xi), the alpha'/beta' snapshot
//!   estimators, mean-convergence bounds, and the Gaussian fourth-moment
//!   identity check.
//! - [`config`] / [`presets`]: experiment descriptions (TOML-loadable) and
//!   the named experiment presets.
//! - [`report`] / [`svg`]: CSV/JSON emission and SVG line charts.

pub mod analysis;
pub mod basis;
pub mod config;
pub mod error;
pub mod filters;
pub mod linalg;
pub mod presets;
pub mod report;
pub mod rng;
pub mod sim;
pub mod svg;

pub use error::{Error, Result};
