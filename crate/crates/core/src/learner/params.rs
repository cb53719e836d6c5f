// SPDX-License-Identifier: Apache-2.0
//! The learnable coefficient matrix `H` and its induced adjacency.

use crate::error::{Error, Result};
use crate::features::{InteractionKind, InteractionMap};
use crate::graph::WeightedAdjacency;
use crate::subset::{Subset, SubsetIndex, MAX_TABLE_NODES};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamMode {
    /// One row per subset of `[p]`, graded-lex.
    Full,
    /// Rows `∅, {0}, .., {p-1}`.
    FirstOrder,
}

/// Column `j` holds the logistic coefficients predicting `X_j`. Entries whose
/// subset contains `j`, or whose monomial the interaction kind drops, are
/// structural zeros. For restricted kinds the "top order" block of column `j`
/// is the product of all other `p - 1` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamMatrix {
    mode: ParamMode,
    kind: InteractionKind,
    p: usize,
    rows: Vec<Subset>,
    values: Vec<f64>,
    free: Vec<bool>,
}

impl ParamMatrix {
    pub fn zeros(map: &InteractionMap) -> Result<Self> {
        let p = map.p();
        let kind = map.kind();
        let (mode, rows) = match kind {
            InteractionKind::FirstOnly => (ParamMode::FirstOrder, kind.active_subsets(p)),
            _ => {
                if p > MAX_TABLE_NODES {
                    return Err(Error::Capacity { what: "full parameter matrix", max: MAX_TABLE_NODES, got: p });
                }
                (ParamMode::Full, SubsetIndex::shared(p)?.subsets().to_vec())
            }
        };
        let others = p.saturating_sub(1);
        let mut free = Vec::with_capacity(rows.len() * p);
        for s in &rows {
            for j in 0..p {
                free.push(!s.contains(j) && kind.is_active(*s, others));
            }
        }
        Ok(ParamMatrix { mode, kind, p, values: vec![0.0; rows.len() * p], rows, free })
    }

    /// Builds `H` from row-major values; nonzero structural zeros are rejected.
    pub fn from_values(map: &InteractionMap, values: Vec<f64>) -> Result<Self> {
        let mut h = Self::zeros(map)?;
        h.set_values(values)?;
        Ok(h)
    }

    pub fn set_values(&mut self, values: Vec<f64>) -> Result<()> {
        if values.len() != self.values.len() {
            return Err(Error::DimensionMismatch { expected: self.values.len(), found: values.len() });
        }
        if let Some(k) = (0..values.len()).find(|&k| !self.free[k] && values[k] != 0.0) {
            return Err(Error::InvalidParameter(format!(
                "entry for subset {:?}, column {} must be zero",
                self.rows[k / self.p],
                k % self.p
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coefficient".into()));
        }
        self.values = values;
        Ok(())
    }

    pub fn mode(&self) -> ParamMode {
        self.mode
    }

    pub fn kind(&self) -> InteractionKind {
        self.kind
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Subsets labelling the rows.
    pub fn rows(&self) -> &[Subset] {
        &self.rows
    }

    /// Row-major, `rows().len() × p`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn free_mask(&self) -> &[bool] {
        &self.free
    }

    pub fn get(&self, s: Subset, j: usize) -> Option<f64> {
        let r = self.row_of(s)?;
        Some(self.values[r * self.p + j])
    }

    pub fn set(&mut self, s: Subset, j: usize, v: f64) -> Result<()> {
        let r = self
            .row_of(s)
            .ok_or_else(|| Error::InvalidParameter(format!("no row for subset {s:?}")))?;
        let k = r * self.p + j;
        if !self.free[k] && v != 0.0 {
            return Err(Error::InvalidParameter(format!("entry for subset {s:?}, column {j} must be zero")));
        }
        self.values[k] = v;
        Ok(())
    }

    fn row_of(&self, s: Subset) -> Option<usize> {
        match self.mode {
            ParamMode::Full => SubsetIndex::shared(self.p).ok()?.position_of(s).ok(),
            ParamMode::FirstOrder => match s.len() {
                0 => Some(0),
                1 => s.iter().next().filter(|&i| i < self.p).map(|i| i + 1),
                _ => None,
            },
        }
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows.len()).map(|r| self.values[r * self.p + j]).collect()
    }

    /// `W(H)`: full mode `W_ij = Σ_{S ∋ i} h_{S,j}²`, first-order `W_ij = |h_{i,j}|`.
    pub fn induced_adjacency(&self) -> Result<WeightedAdjacency> {
        if let Some(k) = (0..self.values.len()).find(|&k| !self.free[k] && self.values[k] != 0.0) {
            return Err(Error::InvalidParameter(format!(
                "structural zero violated at subset {:?}, column {}",
                self.rows[k / self.p],
                k % self.p
            )));
        }
        WeightedAdjacency::new(self.p, induced_entries(self.mode, self.p, &self.rows, &self.values))
    }
}

pub(crate) fn induced_entries(mode: ParamMode, p: usize, rows: &[Subset], values: &[f64]) -> Vec<f64> {
    let mut w = vec![0.0; p * p];
    match mode {
        ParamMode::Full => {
            for (r, s) in rows.iter().enumerate() {
                for j in 0..p {
                    let h = values[r * p + j];
                    if h != 0.0 {
                        for i in s.iter() {
                            w[i * p + j] += h * h;
                        }
                    }
                }
            }
        }
        ParamMode::FirstOrder => {
            for i in 0..p {
                for j in 0..p {
                    w[i * p + j] = values[(i + 1) * p + j].abs();
                }
            }
        }
    }
    for i in 0..p {
        w[i * p + i] = 0.0;
    }
    w
}

/// Maps a gradient with respect to `W` back onto `H`. In first-order mode the
/// sign of `h` is used, which is 0 at 0.
pub(crate) fn pull_back(mode: ParamMode, p: usize, rows: &[Subset], values: &[f64], gw: &[f64], out: &mut [f64]) {
    match mode {
        ParamMode::Full => {
            for (r, s) in rows.iter().enumerate() {
                for j in 0..p {
                    let h = values[r * p + j];
                    if h != 0.0 {
                        let g: f64 = s.iter().map(|i| gw[i * p + j]).sum();
                        out[r * p + j] += 2.0 * h * g;
                    }
                }
            }
        }
        ParamMode::FirstOrder => {
            for i in 0..p {
                for j in 0..p {
                    let h = values[(i + 1) * p + j];
                    if h != 0.0 {
                        out[(i + 1) * p + j] += h.signum() * gw[i * p + j];
                    }
                }
            }
        }
    }
}
