// SPDX-License-Identifier: Apache-2.0
//! Logistic score of `H` and its regularized form.
//!
//! `score(H) = Σ_j E[log(1 + e^{z_j}) − X_j z_j]` with `z = Φ(X)·H`, the
//! expectation taken over the empirical rows or over a probability table.
//! Both cases reduce to a weighted sum over distinct configurations.

use nalgebra::DMatrix;

use super::params::{induced_entries, pull_back, ParamMatrix, ParamMode};
use super::penalty::{quasi_mcp, PenaltyParams};
use crate::dataset::BinaryDataset;
use crate::error::{Error, Result};
use crate::features::InteractionMap;
use crate::mvb::{sigmoid, softplus, GeneralParams};
use crate::subset::Subset;
use crate::transform;

/// What the score averages over.
#[derive(Clone, Copy, Debug)]
pub enum ScoreInput<'a> {
    Data(&'a BinaryDataset),
    Population(&'a GeneralParams),
}

impl ScoreInput<'_> {
    pub fn p(&self) -> usize {
        match self {
            ScoreInput::Data(d) => d.p(),
            ScoreInput::Population(gp) => gp.p(),
        }
    }

    /// Distinct configurations with weights summing to 1.
    fn weighted_configs(&self) -> Result<Vec<(Subset, f64)>> {
        match self {
            ScoreInput::Data(d) => {
                if d.n() == 0 {
                    return Err(Error::InvalidInput("dataset has no rows".into()));
                }
                let n = d.n() as f64;
                Ok(d.config_counts()?.into_iter().map(|(s, c)| (s, c as f64 / n)).collect())
            }
            ScoreInput::Population(gp) => Ok(gp
                .probs()
                .iter()
                .enumerate()
                .filter(|(_, &w)| w > 0.0)
                .map(|(c, &w)| (Subset::from_bits(c as u64), w))
                .collect()),
        }
    }
}

enum Layout {
    /// Weights indexed by configuration mask; coefficients scattered by row mask.
    Dense { weights: Vec<f64>, row_mask: Vec<usize> },
    /// Feature rows `[1, x]` of the distinct configurations.
    Linear { features: DMatrix<f64>, labels: DMatrix<f64>, weights: Vec<f64> },
}

/// Precomputed expected logistic loss for one input.
pub(crate) struct LossModel {
    mode: ParamMode,
    p: usize,
    rows: Vec<Subset>,
    layout: Layout,
}

fn check_consistent(h: &ParamMatrix, map: &InteractionMap, p: usize) -> Result<()> {
    if map.kind() != h.kind() {
        return Err(Error::InvalidInput(format!(
            "parameter matrix built for '{}' used with map '{}'",
            h.kind(),
            map.kind()
        )));
    }
    if map.p() != h.p() {
        return Err(Error::DimensionMismatch { expected: h.p(), found: map.p() });
    }
    if p != h.p() {
        return Err(Error::DimensionMismatch { expected: h.p(), found: p });
    }
    Ok(())
}

impl LossModel {
    pub(crate) fn new(h: &ParamMatrix, input: ScoreInput<'_>, map: &InteractionMap) -> Result<Self> {
        check_consistent(h, map, input.p())?;
        let p = h.p();
        let configs = input.weighted_configs()?;
        let layout = match h.mode() {
            ParamMode::Full => {
                let mut weights = vec![0.0; 1 << p];
                for (s, w) in configs {
                    weights[s.bits() as usize] += w;
                }
                let row_mask = h.rows().iter().map(|s| s.bits() as usize).collect();
                Layout::Dense { weights, row_mask }
            }
            ParamMode::FirstOrder => {
                let m = configs.len();
                let mut features = DMatrix::zeros(m, p + 1);
                let mut labels = DMatrix::zeros(m, p);
                let mut weights = Vec::with_capacity(m);
                for (r, (s, w)) in configs.iter().enumerate() {
                    features[(r, 0)] = 1.0;
                    for i in s.iter() {
                        features[(r, i + 1)] = 1.0;
                        labels[(r, i)] = 1.0;
                    }
                    weights.push(*w);
                }
                Layout::Linear { features, labels, weights }
            }
        };
        Ok(LossModel { mode: h.mode(), p, rows: h.rows().to_vec(), layout })
    }

    pub(crate) fn mode(&self) -> ParamMode {
        self.mode
    }

    pub(crate) fn p(&self) -> usize {
        self.p
    }

    pub(crate) fn rows(&self) -> &[Subset] {
        &self.rows
    }

    /// Loss at `values`; when `grad` is given it is overwritten with the
    /// gradient (structural entries included, callers mask them).
    pub(crate) fn eval(&self, values: &[f64], mut grad: Option<&mut [f64]>) -> f64 {
        let p = self.p;
        match &self.layout {
            Layout::Dense { weights, row_mask } => {
                let size = weights.len();
                let mut total = 0.0;
                let mut z = vec![0.0; size];
                for j in 0..p {
                    z.iter_mut().for_each(|v| *v = 0.0);
                    for (r, &m) in row_mask.iter().enumerate() {
                        z[m] = values[r * p + j];
                    }
                    transform::subset_sum(&mut z);
                    let mut loss = 0.0;
                    for (c, zc) in z.iter_mut().enumerate() {
                        let w = weights[c];
                        let x = (c >> j & 1) as f64;
                        if w > 0.0 {
                            loss += w * (softplus(*zc) - x * *zc);
                        }
                        *zc = w * (sigmoid(*zc) - x);
                    }
                    total += loss;
                    if let Some(g) = grad.as_deref_mut() {
                        transform::superset_sum(&mut z);
                        for (r, &m) in row_mask.iter().enumerate() {
                            g[r * p + j] = z[m];
                        }
                    }
                }
                total
            }
            Layout::Linear { features, labels, weights } => {
                let h = DMatrix::from_row_slice(p + 1, p, values);
                let mut z = features * h;
                let mut total = 0.0;
                for (r, &w) in weights.iter().enumerate() {
                    for j in 0..p {
                        let (zz, y) = (z[(r, j)], labels[(r, j)]);
                        total += w * (softplus(zz) - y * zz);
                        z[(r, j)] = w * (sigmoid(zz) - y);
                    }
                }
                if let Some(g) = grad {
                    let gm = features.tr_mul(&z);
                    for a in 0..=p {
                        for j in 0..p {
                            g[a * p + j] = gm[(a, j)];
                        }
                    }
                }
                total
            }
        }
    }
}

/// `Σ_{i≠j} quasi_mcp(W_ij)`; with `grad`, its gradient in `H` is added.
pub(crate) fn penalty_term(
    mode: ParamMode,
    p: usize,
    rows: &[Subset],
    values: &[f64],
    pp: PenaltyParams,
    grad: Option<&mut [f64]>,
) -> f64 {
    let w = induced_entries(mode, p, rows, values);
    let mut gw = vec![0.0; p * p];
    let mut total = 0.0;
    for i in 0..p {
        for j in 0..p {
            if i != j {
                let (v, d) = quasi_mcp(w[i * p + j], pp);
                total += v;
                gw[i * p + j] = d;
            }
        }
    }
    if let Some(g) = grad {
        pull_back(mode, p, rows, values, &gw, g);
    }
    total
}

fn masked(h: &ParamMatrix, mut g: Vec<f64>) -> Vec<f64> {
    for (v, &f) in g.iter_mut().zip(h.free_mask()) {
        if !f {
            *v = 0.0;
        }
    }
    g
}

fn score_impl(h: &ParamMatrix, input: ScoreInput<'_>, map: &InteractionMap, want_grad: bool) -> Result<(f64, Vec<f64>)> {
    let model = LossModel::new(h, input, map)?;
    let mut g = vec![0.0; h.values().len()];
    let v = model.eval(h.values(), want_grad.then_some(&mut g[..]));
    Ok((v, masked(h, g)))
}

/// Average logistic loss over the rows of `data`.
pub fn score(h: &ParamMatrix, data: &BinaryDataset, map: &InteractionMap) -> Result<f64> {
    Ok(score_impl(h, ScoreInput::Data(data), map, false)?.0)
}

/// [`score`] and its gradient, row-major like [`ParamMatrix::values`].
pub fn score_with_grad(h: &ParamMatrix, data: &BinaryDataset, map: &InteractionMap) -> Result<(f64, Vec<f64>)> {
    score_impl(h, ScoreInput::Data(data), map, true)
}

/// Expected logistic loss under `gp`.
pub fn population_score(h: &ParamMatrix, gp: &GeneralParams, map: &InteractionMap) -> Result<f64> {
    Ok(score_impl(h, ScoreInput::Population(gp), map, false)?.0)
}

pub fn population_score_with_grad(h: &ParamMatrix, gp: &GeneralParams, map: &InteractionMap) -> Result<(f64, Vec<f64>)> {
    score_impl(h, ScoreInput::Population(gp), map, true)
}

/// Score plus `Σ_{i≠j} quasi_mcp([W(H)]_ij)`.
pub fn regularized_score(h: &ParamMatrix, input: ScoreInput<'_>, pp: PenaltyParams, map: &InteractionMap) -> Result<f64> {
    Ok(regularized_score_with_grad(h, input, pp, map)?.0)
}

/// Gradient uses derivative 0 for the penalty at `t = 0`.
pub fn regularized_score_with_grad(
    h: &ParamMatrix,
    input: ScoreInput<'_>,
    pp: PenaltyParams,
    map: &InteractionMap,
) -> Result<(f64, Vec<f64>)> {
    h.induced_adjacency()?;
    let model = LossModel::new(h, input, map)?;
    let mut g = vec![0.0; h.values().len()];
    let v = model.eval(h.values(), Some(&mut g));
    let pen = penalty_term(h.mode(), h.p(), h.rows(), h.values(), pp, Some(&mut g));
    Ok((v + pen, masked(h, g)))
}
