// SPDX-License-Identifier: Apache-2.0
//! Comparison of candidate graphs found by the solver.
//!
//! Each candidate is refit by maximum likelihood on its own support, using
//! the rows of the parameter matrix that lie inside each parent set, and
//! charged `ln(n)/(2n)` per non-intercept coefficient. Population inputs get
//! no charge, so the comparison falls through to the edge count.

use std::collections::BTreeMap;

use super::logistic::logistic_fit_weighted;
use super::score::ScoreInput;
use crate::error::Result;
use crate::graph::Dag;
use crate::subset::Subset;

/// Values closer than this are treated as ties.
const TIE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Rank {
    pub value: f64,
    pub edges: usize,
}

impl Rank {
    pub fn better_than(&self, other: &Rank) -> bool {
        if self.value < other.value - TIE_TOL {
            return true;
        }
        self.value <= other.value + TIE_TOL && self.edges < other.edges
    }
}

pub(crate) struct Selector<'a> {
    /// Distinct configurations with probability weights summing to 1.
    cells: Vec<(Subset, f64)>,
    charge: f64,
    rows: &'a [Subset],
}

impl<'a> Selector<'a> {
    pub fn new(input: &ScoreInput<'_>, rows: &'a [Subset]) -> Result<Self> {
        let (cells, charge) = match input {
            ScoreInput::Data(d) => {
                let n = d.n() as f64;
                let cells = d.config_counts()?.into_iter().map(|(s, c)| (s, c as f64 / n)).collect();
                (cells, n.ln() / (2.0 * n))
            }
            ScoreInput::Population(gp) => {
                let cells = gp
                    .probs()
                    .iter()
                    .enumerate()
                    .filter(|(_, &q)| q > 0.0)
                    .map(|(c, &q)| (Subset::from_bits(c as u64), q))
                    .collect();
                (cells, 0.0)
            }
        };
        Ok(Selector { cells, charge, rows })
    }

    pub fn rank(&self, dag: &Dag) -> Result<Rank> {
        let mut value = 0.0;
        for j in 0..dag.p() {
            let parents = Subset::from_indices(dag.parents(j));
            let layout: Vec<Subset> =
                self.rows.iter().copied().filter(|s| s.is_subset_of(parents)).collect();
            let mut groups: BTreeMap<(Subset, bool), f64> = BTreeMap::new();
            for &(x, q) in &self.cells {
                let local = Subset::from_bits(x.bits() & parents.bits());
                *groups.entry((local, x.contains(j))).or_default() += q;
            }
            let m = layout.len();
            let mut features = Vec::with_capacity(groups.len() * m);
            let mut labels = Vec::with_capacity(groups.len());
            let mut weights = Vec::with_capacity(groups.len());
            for (&(local, y), &q) in &groups {
                features.extend(layout.iter().map(|s| if s.is_subset_of(local) { 1.0 } else { 0.0 }));
                labels.push(u8::from(y));
                weights.push(q);
            }
            // Separated cells leave the fit unconverged; its loss is then
            // still within the iteration's tolerance of the supremum.
            value += logistic_fit_weighted(&features, m, &labels, &weights, 0.0)?.loss;
            value += self.charge * (m - 1) as f64;
        }
        Ok(Rank { value, edges: dag.edge_count() })
    }
}
