// SPDX-License-Identifier: Apache-2.0
//! Quasi-MCP edge penalty.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PenaltyParams {
    lambda: f64,
    delta: f64,
}

impl PenaltyParams {
    /// `lambda = 0` is accepted and switches the penalty off.
    pub fn new(lambda: f64, delta: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("lambda {lambda} must be nonnegative")));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidParameter(format!("delta {delta} must be positive")));
        }
        Ok(PenaltyParams { lambda, delta })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Saturation level `λδ/2`.
    pub fn cap(&self) -> f64 {
        self.lambda * self.delta / 2.0
    }
}

/// Value and derivative of `λ[(|t| − t²/2δ)·1(|t| < δ) + (δ/2)·1(|t| ≥ δ)]`.
/// The derivative at `t = 0` is taken as 0.
pub fn quasi_mcp(t: f64, pp: PenaltyParams) -> (f64, f64) {
    let PenaltyParams { lambda, delta } = pp;
    let a = t.abs();
    if a >= delta {
        (lambda * delta / 2.0, 0.0)
    } else if t == 0.0 {
        (0.0, 0.0)
    } else {
        (lambda * (a - t * t / (2.0 * delta)), lambda * (t.signum() - t / delta))
    }
}

/// `quasi_mcp(t) − λ|t|`, which is continuously differentiable everywhere.
/// Pairing it with an explicit `λ|t|` term lets an orthant-wise solver handle
/// the kink at zero.
pub(crate) fn quasi_mcp_smooth_part(t: f64, pp: PenaltyParams) -> (f64, f64) {
    let PenaltyParams { lambda, delta } = pp;
    let a = t.abs();
    if a >= delta {
        (lambda * delta / 2.0 - lambda * a, -lambda * t.signum())
    } else {
        (-lambda * t * t / (2.0 * delta), -lambda * t / delta)
    }
}
