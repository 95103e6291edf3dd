//! Small dense linear algebra helpers: symmetric eigendecomposition via
//! cyclic Jacobi rotations, plus the vector/matrix products the analysis
//! module needs. Matrices are `Vec<Vec<f64>>` in row-major order; problem
//! sizes stay in the tens, so clarity wins over blocking or SIMD.

// Dense kernels read better with explicit index loops.
#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};

/// Eigendecomposition `A = Q diag(values) Q^T` of a symmetric matrix.
/// Eigenvalues are sorted ascending; `vectors[j]` is the eigenvector for
/// `values[j]` (unit norm, columns of `Q`).
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Sum of squared off-diagonal entries.
fn off_diag_sq(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += a[i][j] * a[i][j];
        }
    }
    2.0 * s
}

/// Cyclic Jacobi eigensolver for symmetric matrices.
///
/// Sweeps rotate away each off-diagonal entry in turn until the off-diagonal
/// Frobenius mass falls below `1e-20` relative to the matrix scale (well past
/// the 1e-10 accuracy the callers rely on). Converges in a handful of sweeps
/// for the sizes used here.
pub fn jacobi_eigen(a: &[Vec<f64>]) -> Result<Eigen> {
    let n = a.len();
    if n == 0 || a.iter().any(|row| row.len() != n) {
        return Err(Error::Contract("eigendecomposition input must be square and non-empty".into()));
    }
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut q: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let scale: f64 = m
        .iter()
        .flat_map(|row| row.iter())
        .map(|v| v.abs())
        .fold(0.0, f64::max)
        .max(1.0);
    let tol = 1e-20 * scale * scale;

    let max_sweeps = 100;
    for _ in 0..max_sweeps {
        if off_diag_sq(&m) <= tol {
            break;
        }
        for p in 0..n {
            for r in (p + 1)..n {
                let apq = m[p][r];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p][p];
                let aqq = m[r][r];
                // Rotation angle from the standard stable formulation.
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][r];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][r] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[r][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[r][k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let qkp = q[k][p];
                    let qkq = q[k][r];
                    q[k][p] = c * qkp - s * qkq;
                    q[k][r] = s * qkp + c * qkq;
                }
            }
        }
    }
    if off_diag_sq(&m) > tol {
        return Err(Error::DegenerateCovariance(
            "Jacobi eigensolver failed to converge in 100 sweeps".into(),
        ));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i][i].partial_cmp(&m[j][j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| m[i][i]).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&j| (0..n).map(|k| q[k][j]).collect())
        .collect();
    Ok(Eigen { values, vectors })
}

/// `y = A v` for row-major `A`.
pub fn mat_vec(a: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(r, x)| r * x).sum())
        .collect()
}

/// `v . w`.
pub fn dot(v: &[f64], w: &[f64]) -> f64 {
    v.iter().zip(w).map(|(a, b)| a * b).sum()
}

/// Squared Euclidean norm.
pub fn norm2_sq(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum()
}
