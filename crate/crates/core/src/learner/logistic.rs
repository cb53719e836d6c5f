// SPDX-License-Identifier: Apache-2.0
//! Ridge-regularized logistic regression by damped Newton iterations.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::mvb::{sigmoid, softplus};

const MAX_ITER: usize = 100;
const GRAD_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct LogisticFit {
    pub weights: Vec<f64>,
    /// Weighted mean loss plus the ridge term at `weights`.
    pub loss: f64,
    pub iterations: usize,
    /// False when the iteration cap was hit, the Hessian was singular, or the
    /// Newton steps did not shrink (the usual sign of separated data).
    pub converged: bool,
}

/// Fits `labels ~ σ(features · w)` minimizing the mean logistic loss plus
/// `ridge/2 · ‖w‖²`. `features` is row-major `n × m`.
pub fn logistic_fit(features: &[f64], m: usize, labels: &[u8], ridge: f64) -> Result<LogisticFit> {
    let w = vec![1.0; labels.len()];
    logistic_fit_weighted(features, m, labels, &w, ridge)
}

/// As [`logistic_fit`] with per-row weights; the loss is the weighted mean.
pub fn logistic_fit_weighted(
    features: &[f64],
    m: usize,
    labels: &[u8],
    row_weights: &[f64],
    ridge: f64,
) -> Result<LogisticFit> {
    logistic_fit_penalized(features, m, labels, row_weights, &vec![ridge; m])
}

/// As [`logistic_fit_weighted`] with one ridge coefficient per column, so
/// that e.g. an intercept column can be left unpenalized.
pub fn logistic_fit_penalized(
    features: &[f64],
    m: usize,
    labels: &[u8],
    row_weights: &[f64],
    ridge: &[f64],
) -> Result<LogisticFit> {
    let n = labels.len();
    if n == 0 {
        return Err(Error::InvalidInput("no observations".into()));
    }
    if features.len() != n * m {
        return Err(Error::DimensionMismatch { expected: n * m, found: features.len() });
    }
    if row_weights.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: row_weights.len() });
    }
    if labels.iter().any(|&y| y > 1) {
        return Err(Error::Domain("labels must be 0 or 1".into()));
    }
    if ridge.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: ridge.len() });
    }
    if let Some(r) = ridge.iter().find(|r| !(**r >= 0.0 && r.is_finite())) {
        return Err(Error::InvalidParameter(format!("ridge {r} must be nonnegative")));
    }
    let ridge = DVector::from_column_slice(ridge);
    let total: f64 = row_weights.iter().sum();
    if !(total > 0.0) || row_weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
        return Err(Error::InvalidInput("row weights must be nonnegative with a positive sum".into()));
    }
    let x = DMatrix::from_row_slice(n, m, features);
    let y = DVector::from_iterator(n, labels.iter().map(|&v| v as f64));
    let omega = DVector::from_iterator(n, row_weights.iter().map(|w| w / total));

    let loss_at = |w: &DVector<f64>| -> f64 {
        let z = &x * w;
        let data: f64 = (0..n).map(|i| omega[i] * (softplus(z[i]) - y[i] * z[i])).sum();
        data + 0.5 * ridge.dot(&w.component_mul(w))
    };

    let mut w = DVector::zeros(m);
    let mut loss = loss_at(&w);
    for iter in 0..MAX_ITER {
        let z = &x * &w;
        let mut r = DVector::zeros(n);
        let mut d = DVector::zeros(n);
        for i in 0..n {
            let s = sigmoid(z[i]);
            r[i] = omega[i] * (s - y[i]);
            d[i] = omega[i] * s * (1.0 - s);
        }
        let grad = x.tr_mul(&r) + ridge.component_mul(&w);
        let mut hess = x.tr_mul(&DMatrix::from_fn(n, m, |i, k| d[i] * x[(i, k)]));
        for k in 0..m {
            hess[(k, k)] += ridge[k];
        }
        let Some(chol) = hess.cholesky() else {
            return Ok(LogisticFit { weights: w.as_slice().to_vec(), loss, iterations: iter, converged: false });
        };
        let step = chol.solve(&grad);
        let grad_norm = grad.amax();
        if grad_norm <= GRAD_TOL {
            let small_step = step.amax() <= 1e-6 * (1.0 + w.amax());
            return Ok(LogisticFit { weights: w.as_slice().to_vec(), loss, iterations: iter, converged: small_step });
        }
        let mut t = 1.0;
        let mut moved = false;
        for _ in 0..40 {
            let cand = &w - t * &step;
            let l = loss_at(&cand);
            if l.is_finite() && l <= loss {
                w = cand;
                loss = l;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            return Ok(LogisticFit { weights: w.as_slice().to_vec(), loss, iterations: iter, converged: false });
        }
    }
    Ok(LogisticFit { weights: w.as_slice().to_vec(), loss, iterations: MAX_ITER, converged: false })
}
