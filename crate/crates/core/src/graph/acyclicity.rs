// SPDX-License-Identifier: Apache-2.0
//! Smooth acyclicity functions `h(W) ≥ 0` with `h(W) = 0` iff the support
//! of `W` is acyclic.

use nalgebra::DMatrix;

use super::{expm::expm, WeightedAdjacency};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum Acyclicity {
    /// `tr(exp(W∘W)) - p`.
    #[default]
    Expm,
    /// `-log det(sI - W∘W) + p log s`; defined while the spectral radius of
    /// `W∘W` stays below `s`.
    LogDet { s: f64 },
}

impl Acyclicity {
    /// Value and gradient for a row-major `p × p` matrix with arbitrary
    /// entries; the gradient is with respect to `W` itself.
    pub fn value_and_grad(&self, p: usize, w: &[f64]) -> Result<(f64, Vec<f64>)> {
        if w.len() != p * p {
            return Err(Error::DimensionMismatch { expected: p * p, found: w.len() });
        }
        if let Some(k) = w.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("entry ({}, {}) is not finite", k / p, k % p)));
        }
        if p == 0 {
            return Ok((0.0, Vec::new()));
        }
        let sq = DMatrix::from_row_iterator(p, p, w.iter().map(|v| v * v));
        match *self {
            Acyclicity::Expm => {
                let e = expm(&sq);
                let h = (e.trace() - p as f64).max(0.0);
                // ∇h = 2 (exp(W∘W))ᵀ ∘ W
                let grad = (0..p * p).map(|k| 2.0 * e[(k % p, k / p)] * w[k]).collect();
                Ok((h, grad))
            }
            Acyclicity::LogDet { s } => {
                let m = DMatrix::<f64>::identity(p, p) * s - sq;
                let lu = m.clone().lu();
                let det = lu.determinant();
                if !(det > 0.0) {
                    return Err(Error::Domain("W∘W left the log-det domain".into()));
                }
                let inv = lu.try_inverse().ok_or_else(|| Error::Domain("singular log-det matrix".into()))?;
                let h = (-det.ln() + p as f64 * s.ln()).max(0.0);
                // ∇h = 2 (sI - W∘W)^{-ᵀ} ∘ W
                let grad = (0..p * p).map(|k| 2.0 * inv[(k % p, k / p)] * w[k]).collect();
                Ok((h, grad))
            }
        }
    }
}

/// Default (`expm`) acyclicity value and gradient of a weighted adjacency.
pub fn acyclicity_value_and_grad(w: &WeightedAdjacency) -> Result<(f64, Vec<f64>)> {
    Acyclicity::Expm.value_and_grad(w.p(), w.entries())
}
