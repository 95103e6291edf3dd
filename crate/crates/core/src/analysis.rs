//! Steady-state excess-MSE machinery for the reweighted-l1 penalized LMS.
//!
//! For input covariance `R` and step size `mu`, standard LMS settles at
//! excess MSE
//!
//! ```text
//! xi_std = eta / (2 - eta) * sigma_n^2,    eta = mu tr{ R (I - mu R)^-1 }
//! ```
//!
//! and the reweighted-l1 variant at
//!
//! ```text
//! xi = xi_std + beta' rho_r (rho_r - alpha'/beta') / (mu (2 - eta))
//! ```
//!
//! where `alpha'` and `beta'` are limits of penalty-induced correction terms.
//! Both are estimated here from Monte-Carlo snapshots of `(w_k, w_{k-1})`
//! taken at a fixed iteration across runs:
//!
//! - `alpha' = 2 ( E||w_k / (eps + |w_{k-1}|)||_1 - E||w / (eps + |w_{k-1}|)||_1 )`
//! - `beta'  = E[ u^T (I - mu R)^-1 u ]` with `u = sgn(w_k) / (eps + |w_{k-1}|)`,
//!   which is non-negative and bounded by `N / (eps^2 (1 - mu lambda_max))`.
//!
//! When `alpha' > 0`, any `rho_r` below the threshold `rho* = alpha'/beta'`
//! is predicted to beat standard LMS. The module also provides the
//! mean-convergence mode bounds (`rho_r q_m / (mu lambda_i eps)`) and a
//! Monte-Carlo check of the Gaussian fourth-moment identity
//! `E[x x^T V x x^T] = 2 R V R + R tr{R V}` used in the derivation.
//!
//! All `(I - mu R)^-1` computations go through the eigendecomposition of `R`,
//! which `Covariance` caches on construction.

// Dense kernels read better with explicit index loops.
#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};
use crate::filters::sgn;
use crate::linalg::{dot, jacobi_eigen, mat_vec};
use crate::sim::SnapshotSample;
use crate::rng::SimRng;

/// Symmetric positive semi-definite input covariance with cached
/// eigendecomposition `R = Q diag(lambda) Q^T`.
#[derive(Debug, Clone)]
pub struct Covariance {
    matrix: Vec<Vec<f64>>,
    eigenvalues: Vec<f64>,
    /// Eigenvector columns, `eigenvectors[j]` paired with `eigenvalues[j]`.
    eigenvectors: Vec<Vec<f64>>,
}

impl Covariance {
    /// Validate symmetry (entry-wise within 1e-12) and positive
    /// semi-definiteness (eigenvalues >= -1e-12), caching the decomposition.
    pub fn new(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::DegenerateCovariance("matrix must be square and non-empty".into()));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if (matrix[i][j] - matrix[j][i]).abs() > 1e-12 {
                    return Err(Error::DegenerateCovariance(format!(
                        "not symmetric at ({i},{j}): {} vs {}",
                        matrix[i][j], matrix[j][i]
                    )));
                }
            }
        }
        let eig = jacobi_eigen(&matrix)?;
        if let Some(&bad) = eig.values.iter().find(|&&l| l < -1e-12) {
            return Err(Error::DegenerateCovariance(format!(
                "negative eigenvalue {bad:.3e}"
            )));
        }
        Ok(Covariance {
            matrix,
            eigenvalues: eig.values,
            eigenvectors: eig.vectors,
        })
    }

    /// Identity covariance (white unit-power input, e.g. BPSK).
    pub fn identity(n: usize) -> Self {
        let matrix: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Covariance::new(matrix).expect("identity is a valid covariance")
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// Eigenvector column for `eigenvalues()[j]`.
    pub fn eigenvector(&self, j: usize) -> &[f64] {
        &self.eigenvectors[j]
    }

    /// Rotate into the eigenbasis: `Q^T v`.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        self.eigenvectors.iter().map(|q| dot(q, v)).collect()
    }

    /// Quadratic form `v^T R v`.
    pub fn quad_form(&self, v: &[f64]) -> f64 {
        dot(v, &mat_vec(&self.matrix, v))
    }

    fn require_stable(&self, mu: f64) -> Result<()> {
        if !mu.is_finite() || mu < 0.0 {
            return Err(Error::Contract(format!("step size must be >= 0, got {mu}")));
        }
        let top = mu * self.max_eigenvalue();
        if top >= 1.0 {
            return Err(Error::Stability(format!(
                "mu * lambda_max = {top:.6} >= 1; (I - mu R) is not invertible in the stable sense"
            )));
        }
        Ok(())
    }
}

/// `eta = mu tr{ R (I - mu R)^-1 } = sum_i mu lambda_i / (1 - mu lambda_i)`.
pub fn eta(mu: f64, r: &Covariance) -> Result<f64> {
    r.require_stable(mu)?;
    Ok(r.eigenvalues()
        .iter()
        .map(|&l| mu * l / (1.0 - mu * l))
        .sum())
}

/// Standard-LMS excess MSE `eta / (2 - eta) * sigma_n^2`; requires `eta < 2`.
pub fn xi_standard(mu: f64, r: &Covariance, sigma2_n: f64) -> Result<f64> {
    if sigma2_n.is_nan() || sigma2_n < 0.0 {
        return Err(Error::Contract(format!("noise variance must be >= 0, got {sigma2_n}")));
    }
    let eta = eta(mu, r)?;
    if eta >= 2.0 {
        return Err(Error::Stability(format!(
            "eta = {eta:.6} >= 2; the excess-MSE fixed point does not exist"
        )));
    }
    Ok(eta / (2.0 - eta) * sigma2_n)
}

/// Empirical excess MSE `tr{ R E[v v^T] }` from coefficient-error samples,
/// computed as the sample mean of the quadratic forms `v^T R v` (the two are
/// equal by the trace cyclic property). For `R = I` this is the mean of
/// `||v||^2`.
pub fn empirical_excess_mse(samples: &[Vec<f64>], r: &Covariance) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Contract("need at least one coefficient-error sample".into()));
    }
    let mut acc = 0.0;
    for v in samples {
        if v.len() != r.dim() {
            return Err(Error::Contract(format!(
                "sample length {} does not match covariance dimension {}",
                v.len(),
                r.dim()
            )));
        }
        acc += r.quad_form(v);
    }
    Ok(acc / samples.len() as f64)
}

/// Estimate `alpha'` from fixed-iteration snapshots:
/// `2 ( mean_i ||w_k/(eps+|w_{k-1}|)||_1 - mean_i ||w/(eps+|w_{k-1}|)||_1 )`.
pub fn estimate_alpha_prime(samples: &[SnapshotSample], eps_r: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Contract("need at least one snapshot".into()));
    }
    if !eps_r.is_finite() || eps_r <= 0.0 {
        return Err(Error::Contract(format!("eps_r must be positive, got {eps_r}")));
    }
    let mut estimate_sum = 0.0;
    let mut truth_sum = 0.0;
    for s in samples {
        for i in 0..s.current.len() {
            let denom = eps_r + s.previous[i].abs();
            estimate_sum += s.current[i].abs() / denom;
            truth_sum += s.channel[i].abs() / denom;
        }
    }
    let runs = samples.len() as f64;
    Ok(2.0 * (estimate_sum / runs - truth_sum / runs))
}

/// Estimate `beta'` from fixed-iteration snapshots:
/// mean over runs of `u^T (I - mu R)^-1 u` with
/// `u = sgn(w_k) / (eps + |w_{k-1}|)` element-wise, evaluated through the
/// eigendecomposition as `sum_j (Q^T u)_j^2 / (1 - mu lambda_j)`.
pub fn estimate_beta_prime(
    samples: &[SnapshotSample],
    eps_r: f64,
    mu: f64,
    r: &Covariance,
) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Contract("need at least one snapshot".into()));
    }
    if !eps_r.is_finite() || eps_r <= 0.0 {
        return Err(Error::Contract(format!("eps_r must be positive, got {eps_r}")));
    }
    r.require_stable(mu)?;
    let mut acc = 0.0;
    for s in samples {
        let u: Vec<f64> = s
            .current
            .iter()
            .zip(&s.previous)
            .map(|(&wk, &wp)| sgn(wk) / (eps_r + wp.abs()))
            .collect();
        let c = r.project(&u);
        acc += c
            .iter()
            .zip(r.eigenvalues())
            .map(|(&cj, &lj)| cj * cj / (1.0 - mu * lj))
            .sum::<f64>();
    }
    Ok(acc / samples.len() as f64)
}

/// Upper bound `N / (eps_r^2 (1 - mu lambda_max))` on `beta'`.
pub fn beta_prime_bound(n: usize, eps_r: f64, mu: f64, r: &Covariance) -> Result<f64> {
    r.require_stable(mu)?;
    Ok(n as f64 / (eps_r * eps_r * (1.0 - mu * r.max_eigenvalue())))
}

/// Excess-MSE prediction bundle for the reweighted-l1 filter.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ExcessMsePrediction {
    pub eta: f64,
    pub xi_standard: f64,
    pub alpha_prime: f64,
    pub beta_prime: f64,
    pub xi_rl1: f64,
    /// Threshold `rho* = alpha'/beta'`; `rho_r` below it is predicted to beat
    /// standard LMS. `None` when `beta' = 0`.
    pub rho_star: Option<f64>,
}

/// Evaluate `xi = eta/(2-eta) sigma^2 + (beta' rho^2 - alpha' rho) / (mu (2-eta))`.
///
/// The second term is the expanded form of
/// `beta' rho (rho - alpha'/beta') / (mu (2-eta))`, valid also at `beta' = 0`.
/// With `rho_r = 0` the result equals the standard-LMS excess MSE exactly.
pub fn xi_rl1_predicted(
    eta: f64,
    sigma2_n: f64,
    alpha_prime: f64,
    beta_prime: f64,
    rho_r: f64,
    mu: f64,
) -> Result<ExcessMsePrediction> {
    if eta >= 2.0 {
        return Err(Error::Stability(format!("eta = {eta:.6} >= 2")));
    }
    if beta_prime.is_nan() || beta_prime < 0.0 {
        return Err(Error::Contract(format!("beta' must be >= 0, got {beta_prime}")));
    }
    if !mu.is_finite() || mu <= 0.0 {
        return Err(Error::Contract(format!("mu must be positive, got {mu}")));
    }
    let xi_std = eta / (2.0 - eta) * sigma2_n;
    let correction = (beta_prime * rho_r * rho_r - alpha_prime * rho_r) / (mu * (2.0 - eta));
    Ok(ExcessMsePrediction {
        eta,
        xi_standard: xi_std,
        alpha_prime,
        beta_prime,
        xi_rl1: xi_std + correction,
        rho_star: (beta_prime > 0.0).then(|| alpha_prime / beta_prime),
    })
}

/// Per-mode asymptotic bounds on `|E[Q^T v_k]|` from the mean-convergence
/// argument: `b_i = rho_r q_m / (mu lambda_i eps_r)` where `q_m` is the
/// largest absolute row sum of `Q^T`. Requires every eigenvalue positive and
/// `mu lambda_max < 1`.
pub fn mean_bound(rho_r: f64, eps_r: f64, mu: f64, r: &Covariance) -> Result<Vec<f64>> {
    if rho_r.is_nan() || rho_r < 0.0 {
        return Err(Error::Contract(format!("rho_r must be >= 0, got {rho_r}")));
    }
    if !eps_r.is_finite() || eps_r <= 0.0 {
        return Err(Error::Contract(format!("eps_r must be positive, got {eps_r}")));
    }
    if !mu.is_finite() || mu <= 0.0 {
        return Err(Error::Contract(format!("mu must be positive, got {mu}")));
    }
    if let Some(&bad) = r.eigenvalues().iter().find(|&&l| l <= 0.0) {
        return Err(Error::DegenerateCovariance(format!(
            "mean bound needs strictly positive eigenvalues, found {bad:.3e}"
        )));
    }
    r.require_stable(mu)?;
    // Row i of Q^T is eigenvector column i.
    let q_m = (0..r.dim())
        .map(|i| r.eigenvector(i).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    Ok(r.eigenvalues()
        .iter()
        .map(|&l| rho_r * q_m / (mu * l * eps_r))
        .collect())
}

/// Monte-Carlo check of the Gaussian fourth-moment identity
/// `E[x x^T V x x^T] = 2 R V R + R tr{R V}` for `x ~ N(0, R)`.
///
/// Draws `samples` vectors, accumulates the left side, and returns the
/// max-entry absolute deviation from the right side normalized by the
/// largest absolute entry of the right side (or 1 when the right side is
/// zero, as for `V = 0`).
pub fn check_fourth_moment_identity(
    r: &Covariance,
    v: &Covariance,
    samples: usize,
    rng: &mut SimRng,
) -> Result<f64> {
    let n = r.dim();
    if v.dim() != n {
        return Err(Error::Contract(format!(
            "V dimension {} does not match R dimension {}",
            v.dim(),
            n
        )));
    }
    if samples == 0 {
        return Err(Error::Contract("need at least one sample".into()));
    }
    // x = Q diag(sqrt(lambda)) g gives cov(x) = R.
    let sqrt_l: Vec<f64> = r.eigenvalues().iter().map(|&l| l.max(0.0).sqrt()).collect();
    let mut lhs = vec![vec![0.0; n]; n];
    let mut x = vec![0.0; n];
    for _ in 0..samples {
        for xi in x.iter_mut() {
            *xi = 0.0;
        }
        for j in 0..n {
            let g = sqrt_l[j] * rng.gaussian();
            let q = r.eigenvector(j);
            for (xi, &qk) in x.iter_mut().zip(q) {
                *xi += qk * g;
            }
        }
        // x x^T V x x^T = (x^T V x) x x^T
        let s = v.quad_form(&x);
        for i in 0..n {
            let si = s * x[i];
            for j in 0..n {
                lhs[i][j] += si * x[j];
            }
        }
    }
    let inv = 1.0 / samples as f64;
    for row in &mut lhs {
        for entry in row.iter_mut() {
            *entry *= inv;
        }
    }

    // rhs = 2 R V R + R tr{R V}
    let rm = r.matrix();
    let vm = v.matrix();
    let rv: Vec<Vec<f64>> = mat_mul(rm, vm);
    let rvr: Vec<Vec<f64>> = mat_mul(&rv, rm);
    let tr_rv: f64 = (0..n).map(|i| rv[i][i]).sum();
    let mut rhs = vec![vec![0.0; n]; n];
    let mut rhs_scale: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            rhs[i][j] = 2.0 * rvr[i][j] + rm[i][j] * tr_rv;
            rhs_scale = rhs_scale.max(rhs[i][j].abs());
        }
    }
    let scale = if rhs_scale > 0.0 { rhs_scale } else { 1.0 };
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((lhs[i][j] - rhs[i][j]).abs() / scale);
        }
    }
    Ok(worst)
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snapshot(current: Vec<f64>, previous: Vec<f64>, channel: Vec<f64>) -> SnapshotSample {
        SnapshotSample { iteration: 0, current, previous, channel }
    }

    #[test]
    fn eta_identity_closed_form() {
        let r = Covariance::identity(16);
        let want = 16.0 * 0.05 / 0.95;
        assert!((eta(0.05, &r).unwrap() - want).abs() < 1e-12);
        assert!((want - 0.8421053).abs() < 1e-6);
    }

    #[test]
    fn eta_scalar_case() {
        let r = Covariance::new(vec![vec![2.0]]).unwrap();
        assert!((eta(0.1, &r).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn eta_vanishes_with_step_size() {
        let r = Covariance::identity(4);
        assert_eq!(eta(0.0, &r).unwrap(), 0.0);
    }

    #[test]
    fn eta_rejects_unstable_step() {
        let r = Covariance::new(vec![vec![2.0]]).unwrap();
        assert!(matches!(eta(0.5, &r), Err(Error::Stability(_))));
    }

    #[test]
    fn xi_standard_examples() {
        let r = Covariance::identity(16);
        let xi = xi_standard(0.05, &r, 0.01).unwrap();
        assert!((xi - 7.2727e-3).abs() < 1e-6, "xi = {xi}");
        assert_eq!(xi_standard(0.05, &r, 0.0).unwrap(), 0.0);

        let scalar = Covariance::new(vec![vec![2.0]]).unwrap();
        let xi = xi_standard(0.1, &scalar, 1.0).unwrap();
        assert!((xi - 0.25 / 1.75).abs() < 1e-12);
        assert!((xi - 0.142857).abs() < 1e-6);
    }

    #[test]
    fn empirical_excess_mse_trivials() {
        let r = Covariance::identity(2);
        assert_eq!(
            empirical_excess_mse(&[vec![0.0, 0.0], vec![0.0, 0.0]], &r).unwrap(),
            0.0
        );
        assert_eq!(empirical_excess_mse(&[vec![1.0, 0.0]], &r).unwrap(), 1.0);
        assert!(empirical_excess_mse(&[], &r).is_err());
    }

    #[test]
    fn alpha_prime_zero_when_estimate_equals_truth() {
        let samples: Vec<SnapshotSample> = (0..5)
            .map(|_| {
                let w = vec![0.7, -0.3, 0.0];
                snapshot(w.clone(), w.clone(), w.clone())
            })
            .collect();
        assert_eq!(estimate_alpha_prime(&samples, 0.05).unwrap(), 0.0);
    }

    #[test]
    fn alpha_prime_hand_case() {
        // One run, one tap: 2 * (|0.5|/(0.05+0.4) - |1|/(0.05+0.4))
        let samples = [snapshot(vec![0.5], vec![0.4], vec![1.0])];
        let want = 2.0 * (0.5 / 0.45 - 1.0 / 0.45);
        assert!((estimate_alpha_prime(&samples, 0.05).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn beta_prime_zero_weights_and_nonnegativity() {
        let r = Covariance::identity(3);
        let zero = [snapshot(vec![0.0; 3], vec![0.0; 3], vec![0.0; 3])];
        assert_eq!(estimate_beta_prime(&zero, 0.05, 0.05, &r).unwrap(), 0.0);

        let mut rng = SimRng::new(61, 0);
        for _ in 0..50 {
            let cur: Vec<f64> = (0..3).map(|_| rng.gaussian()).collect();
            let prev: Vec<f64> = (0..3).map(|_| rng.gaussian()).collect();
            let samples = [snapshot(cur, prev, vec![0.0; 3])];
            let bp = estimate_beta_prime(&samples, 0.05, 0.05, &r).unwrap();
            let bound = beta_prime_bound(3, 0.05, 0.05, &r).unwrap();
            assert!(bp >= 0.0);
            assert!(bp <= bound, "beta' {bp} above bound {bound}");
        }
    }

    #[test]
    fn beta_prime_identity_closed_form() {
        // u has all entries sgn/(eps+|prev|); with prev = 0, u_i = +-1/eps,
        // so u^T (I - mu I)^-1 u = N / (eps^2 (1-mu)) = the bound itself.
        let r = Covariance::identity(16);
        let samples = [snapshot(vec![1.0; 16], vec![0.0; 16], vec![0.0; 16])];
        let bp = estimate_beta_prime(&samples, 0.05, 0.05, &r).unwrap();
        let bound = beta_prime_bound(16, 0.05, 0.05, &r).unwrap();
        assert!((bp - bound).abs() < 1e-9 * bound);
        assert!((bound - 6736.8).abs() < 0.1, "bound = {bound}");
    }

    #[test]
    fn xi_rl1_reduces_to_standard_at_zero_rho() {
        let r = Covariance::identity(16);
        let eta_v = eta(0.05, &r).unwrap();
        let pred = xi_rl1_predicted(eta_v, 0.01, 3.23, 100.0, 0.0, 0.05).unwrap();
        assert_eq!(pred.xi_rl1, pred.xi_standard);
        assert_eq!(pred.xi_standard, xi_standard(0.05, &r, 0.01).unwrap());
    }

    #[test]
    fn xi_rl1_sign_analysis() {
        let r = Covariance::identity(16);
        let eta_v = eta(0.05, &r).unwrap();
        // alpha' > 0 and rho below threshold: improvement.
        let pred = xi_rl1_predicted(eta_v, 0.01, 3.0, 1000.0, 1e-3, 0.05).unwrap();
        assert!(pred.rho_star.unwrap() > 1e-3);
        assert!(pred.xi_rl1 < pred.xi_standard);
        // alpha' < 0 with any positive rho: degradation.
        let pred = xi_rl1_predicted(eta_v, 0.01, -2.0, 1000.0, 1e-3, 0.05).unwrap();
        assert!(pred.xi_rl1 > pred.xi_standard);
        // beta' = 0 leaves the linear term only.
        let pred = xi_rl1_predicted(eta_v, 0.01, 2.0, 0.0, 1e-3, 0.05).unwrap();
        assert!(pred.rho_star.is_none());
        let expect = pred.xi_standard - 2.0 * 1e-3 / (0.05 * (2.0 - eta_v));
        assert!((pred.xi_rl1 - expect).abs() < 1e-15);
    }

    #[test]
    fn mean_bound_identity_closed_form() {
        let r = Covariance::identity(16);
        let b = mean_bound(5e-4, 0.05, 0.05, &r).unwrap();
        for v in &b {
            assert!((v - 0.2).abs() < 1e-12, "bound {v}");
        }
        // zero rho: bound collapses to zero
        let b0 = mean_bound(0.0, 0.05, 0.05, &r).unwrap();
        assert!(b0.iter().all(|&v| v == 0.0));
        // doubling eps halves the bound
        let b2 = mean_bound(5e-4, 0.10, 0.05, &r).unwrap();
        for (half, full) in b2.iter().zip(&b) {
            assert!((half * 2.0 - full).abs() < 1e-12);
        }
    }

    #[test]
    fn mean_bound_rejects_degenerate_modes() {
        let r = Covariance::new(vec![vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            mean_bound(5e-4, 0.05, 0.05, &r),
            Err(Error::DegenerateCovariance(_))
        ));
    }

    #[test]
    fn fourth_moment_scalar_kurtosis() {
        // N = 1, R = V = [1]: RHS = 2 + 1 = 3, the Gaussian fourth moment.
        let r = Covariance::identity(1);
        let mut rng = SimRng::new(71, 0);
        let err = check_fourth_moment_identity(&r, &r, 200_000, &mut rng).unwrap();
        assert!(err < 0.03, "relative error {err}");
    }

    #[test]
    fn fourth_moment_zero_v() {
        let r = Covariance::identity(3);
        let v = Covariance::new(vec![vec![0.0; 3], vec![0.0; 3], vec![0.0; 3]]).unwrap();
        let mut rng = SimRng::new(72, 0);
        let err = check_fourth_moment_identity(&r, &v, 100, &mut rng).unwrap();
        assert_eq!(err, 0.0);
    }

    #[test]
    fn eta_eigen_path_matches_direct_inverse_oracle() {
        // Independent oracle: Gauss-Jordan inverse of (I - mu R), then
        // mu * tr(R * inv) computed directly.
        fn invert(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
            let n = m.len();
            let mut a: Vec<Vec<f64>> = m
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let mut r = row.clone();
                    r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
                    r
                })
                .collect();
            for col in 0..n {
                let pivot = (col..n)
                    .max_by(|&p, &q| a[p][col].abs().partial_cmp(&a[q][col].abs()).unwrap())
                    .unwrap();
                a.swap(col, pivot);
                let div = a[col][col];
                for v in a[col].iter_mut() {
                    *v /= div;
                }
                for row in 0..n {
                    if row != col && a[row][col] != 0.0 {
                        let f = a[row][col];
                        for j in 0..2 * n {
                            a[row][j] -= f * a[col][j];
                        }
                    }
                }
            }
            a.into_iter().map(|row| row[n..].to_vec()).collect()
        }

        let mut rng = SimRng::new(73, 0);
        for trial in 0..8 {
            let n = 3 + trial % 4;
            // Random PD matrix: A^T A / n + small ridge.
            let g: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gaussian()).collect())
                .collect();
            let mut m = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..n {
                    m[i][j] = (0..n).map(|k| g[k][i] * g[k][j]).sum::<f64>() / n as f64;
                }
                m[i][i] += 0.1;
            }
            let r = Covariance::new(m.clone()).unwrap();
            let mu = 0.4 / r.max_eigenvalue(); // mu lambda_max = 0.4 < 0.5
            let via_eigen = eta(mu, &r).unwrap();

            let n_dim = r.dim();
            let i_minus: Vec<Vec<f64>> = (0..n_dim)
                .map(|i| {
                    (0..n_dim)
                        .map(|j| if i == j { 1.0 - mu * m[i][j] } else { -mu * m[i][j] })
                        .collect()
                })
                .collect();
            let inv = invert(&i_minus);
            let mut trace = 0.0;
            for i in 0..n_dim {
                for k in 0..n_dim {
                    trace += m[i][k] * inv[k][i];
                }
            }
            let via_inverse = mu * trace;
            let rel = (via_eigen - via_inverse).abs() / via_inverse.abs().max(1e-300);
            assert!(rel < 1e-10, "eta mismatch: eigen {via_eigen} vs inverse {via_inverse}");
        }
    }
}
