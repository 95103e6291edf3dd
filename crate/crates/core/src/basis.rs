//! Orthonormal sparsity-domain transforms and the basis-generalized update
//! rules.
//!
//! A channel that is sparse in some orthonormal basis `Psi` (rows of an N x N
//! matrix) has a representation `u = Psi w` with few nonzero entries. The
//! penalized update rules move their shrinkage into that domain:
//!
//! ```text
//! ZA    w' = w + mu e x - rho Psi^T sgn(Psi w)
//! RL1   w' = w + mu e x - rho Psi^T [ sgn(Psi w) / (eps + |Psi w_prev|) ]
//! LP    w' = w + mu e x - rho ||Psi w||_p^(1-p) Psi^T [ sgn(Psi w) / (eps + |Psi w|^(1-p)) ]
//! ```
//!
//! Everything is stored column-vector style, so the row-vector product
//! `sgn(Psi w) Psi` appears here as `Psi^T g`. With `Psi = I` each
//! rule runs the identical element-wise arithmetic as its time-domain
//! counterpart (the identity matvec is exact in floating point), so the
//! specialization matches bit for bit.

use crate::error::{Error, Result};
use crate::filters::{lp_norm, predict_and_error, sgn, StepOutput, TapDelayLine, WeightState};

/// How a basis was constructed; `Custom` covers matrices loaded from files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    Identity,
    Dct,
    Custom,
}

/// Validated orthonormal N x N sparsity basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalBasis {
    kind: BasisKind,
    n: usize,
    /// Row-major matrix Psi.
    psi: Vec<f64>,
}

/// Orthonormality tolerance for matrices supplied by callers or files.
pub const CUSTOM_ORTHONORMALITY_TOL: f64 = 1e-8;

impl OrthonormalBasis {
    /// Identity basis (time domain).
    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Contract("basis dimension must be >= 1".into()));
        }
        let mut psi = vec![0.0; n * n];
        for i in 0..n {
            psi[i * n + i] = 1.0;
        }
        Ok(OrthonormalBasis { kind: BasisKind::Identity, n, psi })
    }

    /// Orthonormal DCT-II basis:
    /// `Psi[k][m] = c_k sqrt(2/n) cos(pi (2m+1) k / (2n))`, `c_0 = 1/sqrt(2)`,
    /// `c_k = 1` otherwise. Rows are orthonormal by construction.
    pub fn dct(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Contract("basis dimension must be >= 1".into()));
        }
        let mut psi = vec![0.0; n * n];
        let scale = (2.0 / n as f64).sqrt();
        for k in 0..n {
            let ck = if k == 0 { std::f64::consts::FRAC_1_SQRT_2 } else { 1.0 };
            for m in 0..n {
                let angle = std::f64::consts::PI * (2 * m + 1) as f64 * k as f64 / (2 * n) as f64;
                psi[k * n + m] = ck * scale * angle.cos();
            }
        }
        let basis = OrthonormalBasis { kind: BasisKind::Dct, n, psi };
        debug_assert!(basis.orthonormality_deviation() < 1e-12);
        Ok(basis)
    }

    /// Basis from an explicit row-major matrix; rejected if `Psi Psi^T`
    /// deviates from the identity by more than [`CUSTOM_ORTHONORMALITY_TOL`]
    /// in any entry.
    pub fn custom(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidBasis("matrix is empty".into()));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::InvalidBasis(format!(
                "matrix is not square: row {bad} has {} entries, expected {n}",
                rows[bad].len()
            )));
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidBasis("matrix entries must be finite".into()));
        }
        let psi: Vec<f64> = rows.into_iter().flatten().collect();
        let basis = OrthonormalBasis { kind: BasisKind::Custom, n, psi };
        let dev = basis.orthonormality_deviation();
        if dev > CUSTOM_ORTHONORMALITY_TOL {
            return Err(Error::InvalidBasis(format!(
                "matrix is not orthonormal: max |Psi Psi^T - I| entry is {dev:.3e} (tolerance {CUSTOM_ORTHONORMALITY_TOL:.0e})"
            )));
        }
        Ok(basis)
    }

    /// Basis from a plain-text file: one row per line, entries separated by
    /// commas and/or whitespace; `#` starts a comment line.
    pub fn from_csv_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row: Vec<f64> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|tok| !tok.is_empty())
                .map(|tok| {
                    tok.parse::<f64>().map_err(|_| {
                        Error::InvalidBasis(format!(
                            "{}:{}: cannot parse '{tok}' as a number",
                            path.display(),
                            lineno + 1
                        ))
                    })
                })
                .collect::<Result<_>>()?;
            rows.push(row);
        }
        Self::custom(rows)
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry `Psi[row][col]`.
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.psi[row * self.n + col]
    }

    /// `Psi v` (transform into the sparsity domain).
    pub fn forward(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|i| {
                let row = &self.psi[i * n..(i + 1) * n];
                row.iter().zip(v).map(|(p, x)| p * x).sum()
            })
            .collect()
    }

    /// `Psi^T v` (transform back to the time domain).
    pub fn inverse(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|i| (0..n).map(|j| self.psi[j * n + i] * v[j]).sum())
            .collect()
    }

    /// Max-entry deviation of `Psi Psi^T` from the identity.
    pub fn orthonormality_deviation(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let prod: f64 = (0..n).map(|k| self.psi[i * n + k] * self.psi[j * n + k]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod - want).abs());
            }
        }
        worst
    }
}

fn check_dims(state: &WeightState, basis: &OrthonormalBasis) -> Result<()> {
    if state.len() != basis.dim() {
        return Err(Error::Contract(format!(
            "basis dimension {} does not match filter length {}",
            basis.dim(),
            state.len()
        )));
    }
    Ok(())
}

/// Shared scaffold for the basis rules: error, base LMS move, minus a
/// penalty vector already mapped back to the time domain.
fn basis_step_with(
    state: &WeightState,
    x: &TapDelayLine,
    d: f64,
    mu: f64,
    penalty: &[f64],
) -> Result<StepOutput> {
    let e = predict_and_error(state, x, d)?;
    let mu_e = mu * e;
    let next_w: Vec<f64> = state
        .weights()
        .iter()
        .zip(x.samples())
        .zip(penalty)
        .map(|((&w, &xi), &g)| w + mu_e * xi - g)
        .collect();
    Ok(StepOutput {
        error: e,
        next: WeightState::new(next_w, state.weights().to_vec())?,
    })
}

/// Zero-attracting update with the l1 penalty applied to `Psi w`.
pub fn za_step_basis(
    state: &WeightState,
    x: &TapDelayLine,
    d: f64,
    mu: f64,
    rho: f64,
    basis: &OrthonormalBasis,
) -> Result<StepOutput> {
    check_dims(state, basis)?;
    let u = basis.forward(state.weights());
    let g: Vec<f64> = u.iter().map(|&ui| sgn(ui)).collect();
    let penalty: Vec<f64> = basis.inverse(&g).iter().map(|&gi| rho * gi).collect();
    basis_step_with(state, x, d, mu, &penalty)
}

/// Reweighted-l1 update with weights computed from `Psi w_prev`.
pub fn rl1_step_basis(
    state: &WeightState,
    x: &TapDelayLine,
    d: f64,
    mu: f64,
    rho: f64,
    eps: f64,
    basis: &OrthonormalBasis,
) -> Result<StepOutput> {
    check_dims(state, basis)?;
    let u = basis.forward(state.weights());
    let u_prev = basis.forward(state.previous());
    let g: Vec<f64> = u
        .iter()
        .zip(&u_prev)
        .map(|(&ui, &pi)| sgn(ui) / (eps + pi.abs()))
        .collect();
    let penalty: Vec<f64> = basis.inverse(&g).iter().map(|&gi| rho * gi).collect();
    basis_step_with(state, x, d, mu, &penalty)
}

/// lp pseudo-norm update with the penalty applied to `Psi w`.
#[allow(clippy::too_many_arguments)]
pub fn lp_step_basis(
    state: &WeightState,
    x: &TapDelayLine,
    d: f64,
    mu: f64,
    rho: f64,
    eps: f64,
    p: f64,
    basis: &OrthonormalBasis,
) -> Result<StepOutput> {
    check_dims(state, basis)?;
    let u = basis.forward(state.weights());
    let factor = rho * lp_norm(&u, p).powf(1.0 - p);
    let g: Vec<f64> = u
        .iter()
        .map(|&ui| sgn(ui) / (eps + ui.abs().powf(1.0 - p)))
        .collect();
    let penalty: Vec<f64> = basis.inverse(&g).iter().map(|&gi| factor * gi).collect();
    basis_step_with(state, x, d, mu, &penalty)
}
