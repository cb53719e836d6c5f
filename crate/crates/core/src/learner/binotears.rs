// SPDX-License-Identifier: Apache-2.0
//! Two-stage learner: a first-order continuous solve fixes a topological
//! order, then each node is regressed on first- and second-order features of
//! its predecessors and weak parents are pruned. Optionally the order is then
//! refined by a local search on the BIC of the pruned second-stage fits.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;

use super::logistic::{logistic_fit_penalized, LogisticFit};
use super::score::ScoreInput;
use super::solve::{solve, SolveResult};
use super::SolverConfig;
use crate::dataset::BinaryDataset;
use crate::error::{Error, Result};
use crate::exact::DEFAULT_EDGE_TOL;
use crate::features::{InteractionKind, InteractionMap};
use crate::graph::{Dag, WeightedAdjacency};
use crate::mvb::softplus;
use crate::rng;
use crate::subset::Subset;

/// Largest `p` for which the second-stage order is refined.
pub const MAX_REFINE_NODES: usize = 16;
const SCORE_TIE: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct BinotearsResult {
    pub dag: Dag,
    /// Order used by the second stage.
    pub order: Vec<usize>,
    pub stage1: SolveResult,
    /// `Σ_{S ∋ i} w_S²` of the fitted coefficients of node `j` on predecessor `i`.
    pub strengths: WeightedAdjacency,
    /// Nodes whose second-stage fit did not converge.
    pub unconverged: Vec<usize>,
}

/// Stage-1 ordering: a topological order of the thresholded first-order
/// graph, breaking ties by `var(X_i) · Σ_j W_ij` of the unthresholded `W`,
/// largest first.
fn stage1_order(data: &BinaryDataset, stage1: &SolveResult) -> Vec<usize> {
    let p = data.p();
    let means = data.column_means();
    let w = &stage1.adjacency;
    let priority: Vec<f64> = (0..p)
        .map(|i| {
            let var = means[i] * (1.0 - means[i]);
            var * (0..p).map(|j| w.get(i, j)).sum::<f64>()
        })
        .collect();
    stage1.dag.topological_order_by(&|v| priority[v])
}

/// Second-stage fits of single nodes, cached by (node, predecessor set).
struct NodeFits {
    p: usize,
    n: f64,
    /// Distinct data rows with their multiplicities.
    rows: Vec<(Subset, f64)>,
    ridge: f64,
    prune_threshold: f64,
    pruned: HashMap<(usize, Subset), Pruned>,
    bic: HashMap<(usize, Subset), f64>,
}

#[derive(Clone)]
struct Pruned {
    parents: Subset,
    strengths: Vec<(usize, f64)>,
    converged: bool,
}

impl NodeFits {
    fn new(data: &BinaryDataset, cfg: &SolverConfig) -> Self {
        let mut counts: BTreeMap<Subset, f64> = BTreeMap::new();
        for row in data.rows() {
            let s: Subset = row.iter().enumerate().filter(|(_, &x)| x == 1).map(|(k, _)| k).collect();
            *counts.entry(s).or_default() += 1.0;
        }
        NodeFits {
            p: data.p(),
            n: data.n() as f64,
            rows: counts.into_iter().collect(),
            // The fit averages over rows, so the ridge is scaled by 1/n.
            ridge: cfg.ridge / data.n() as f64,
            prune_threshold: cfg.prune_threshold,
            pruned: HashMap::new(),
            bic: HashMap::new(),
        }
    }

    /// Logistic fit of `node` on first- and second-order features of `vars`.
    /// Returns the layout, the fit and the unpenalized negative log-likelihood.
    fn fit(&self, node: usize, vars: &[usize]) -> Result<(Vec<Subset>, LogisticFit, f64)> {
        let layout = InteractionKind::FirstSecond.active_subsets(vars.len());
        // Rows collapse to (configuration of vars, label) counts.
        let mut groups: BTreeMap<(Subset, u8), f64> = BTreeMap::new();
        for &(row, count) in &self.rows {
            let local: Subset = vars.iter().enumerate().filter(|(_, &v)| row.contains(v)).map(|(k, _)| k).collect();
            *groups.entry((local, u8::from(row.contains(node)))).or_default() += count;
        }
        let m = layout.len();
        let mut features = Vec::with_capacity(groups.len() * m);
        let mut labels = Vec::with_capacity(groups.len());
        let mut weights = Vec::with_capacity(groups.len());
        for (&(local, y), &count) in &groups {
            features.extend(layout.iter().map(|s| if s.is_subset_of(local) { 1.0 } else { 0.0 }));
            labels.push(y);
            weights.push(count);
        }
        let ridge: Vec<f64> = layout.iter().map(|s| if s.is_empty() { 0.0 } else { self.ridge }).collect();
        let fit = logistic_fit_penalized(&features, m, &labels, &weights, &ridge)?;
        let nll = features
            .chunks(m)
            .zip(labels.iter().zip(&weights))
            .map(|(x, (&y, &c))| {
                let z: f64 = x.iter().zip(&fit.weights).map(|(a, b)| a * b).sum();
                c * (softplus(z) - if y == 1 { z } else { 0.0 })
            })
            .sum();
        Ok((layout, fit, nll))
    }

    /// Fits `node` on all of `preds` and keeps the strong parents.
    fn prune(&mut self, node: usize, preds: Subset) -> Result<Pruned> {
        if let Some(r) = self.pruned.get(&(node, preds)) {
            return Ok(r.clone());
        }
        let vars: Vec<usize> = preds.iter().collect();
        let (layout, fit, _) = self.fit(node, &vars)?;
        let mut parents = Subset::EMPTY;
        let mut strengths = Vec::with_capacity(vars.len());
        for (k, &i) in vars.iter().enumerate() {
            let s: f64 = layout.iter().zip(&fit.weights).filter(|(sub, _)| sub.contains(k)).map(|(_, w)| w * w).sum();
            strengths.push((i, s));
            if s > DEFAULT_EDGE_TOL && s > self.prune_threshold {
                parents = parents.with(i);
            }
        }
        let r = Pruned { parents, strengths, converged: fit.converged };
        self.pruned.insert((node, preds), r.clone());
        Ok(r)
    }

    /// BIC of `node` refit on `parents` alone.
    fn bic(&mut self, node: usize, parents: Subset) -> Result<f64> {
        if let Some(&b) = self.bic.get(&(node, parents)) {
            return Ok(b);
        }
        let vars: Vec<usize> = parents.iter().collect();
        let (layout, _, nll) = self.fit(node, &vars)?;
        let b = nll + 0.5 * self.n.ln() * (layout.len() - 1) as f64;
        self.bic.insert((node, parents), b);
        Ok(b)
    }

    fn order_score(&mut self, order: &[usize]) -> Result<f64> {
        let mut total = 0.0;
        let mut preds = Subset::EMPTY;
        for &node in order {
            let parents = self.prune(node, preds)?.parents;
            total += self.bic(node, parents)?;
            preds = preds.with(node);
        }
        Ok(total)
    }

    /// Insertion hill-climb on [`Self::order_score`] from `start`, then
    /// `kicks` restarts from the best order with two random moves applied.
    fn search(&mut self, start: Vec<usize>, kicks: usize, seed: u64) -> Result<Vec<usize>> {
        let p = self.p;
        let climb = |fits: &mut Self, mut current: Vec<usize>| -> Result<(Vec<usize>, f64)> {
            let mut score = fits.order_score(&current)?;
            'climb: loop {
                for from in 0..p {
                    for to in 0..p {
                        if from == to || to + 1 == from {
                            continue;
                        }
                        let mut cand = current.clone();
                        let v = cand.remove(from);
                        cand.insert(to, v);
                        let s = fits.order_score(&cand)?;
                        if s < score - SCORE_TIE {
                            (current, score) = (cand, s);
                            continue 'climb;
                        }
                    }
                }
                return Ok((current, score));
            }
        };
        let (mut best, mut best_score) = climb(self, start)?;
        let mut rng = rng::stream(seed, rng::STAGE2_ORDER_STREAM);
        for _ in 0..kicks {
            let mut cand = best.clone();
            for _ in 0..2 {
                let v = cand.remove(rng.random_range(0..p));
                cand.insert(rng.random_range(0..p), v);
            }
            let (o, s) = climb(self, cand)?;
            if s < best_score - SCORE_TIE {
                (best, best_score) = (o, s);
            }
        }
        Ok(best)
    }
}

pub fn binotears(data: &BinaryDataset, cfg: &SolverConfig) -> Result<BinotearsResult> {
    let p = data.p();
    if p < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 variables, found {p}")));
    }
    if data.n() == 0 {
        return Err(Error::InvalidInput("dataset has no rows".into()));
    }
    let map = InteractionMap::new(InteractionKind::FirstOnly, p)?;
    let stage1 = solve(ScoreInput::Data(data), &map, cfg)?;
    let mut fits = NodeFits::new(data, cfg);
    let mut order = stage1_order(data, &stage1);
    if cfg.refine_order && p <= MAX_REFINE_NODES {
        order = fits.search(order, cfg.order_kicks, cfg.seed)?;
    }

    let mut dag = Dag::empty(p);
    let mut strengths = vec![0.0; p * p];
    let mut unconverged = Vec::new();
    let mut preds = Subset::EMPTY;
    for &node in &order {
        let r = fits.prune(node, preds)?;
        if !r.converged {
            unconverged.push(node);
        }
        for &(i, s) in &r.strengths {
            strengths[i * p + node] = s;
        }
        for i in r.parents.iter() {
            dag.try_add_edge(i, node).expect("edges follow the order");
        }
        preds = preds.with(node);
    }
    let strengths = WeightedAdjacency::new(p, strengths)?;
    Ok(BinotearsResult { dag, order, stage1, strengths, unconverged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvb::GeneralParams;

    #[test]
    fn independent_data_gives_empty_graph() {
        let gp = GeneralParams::uniform(4).unwrap();
        let data = gp.sample(2000, 11);
        let r = binotears(&data, &SolverConfig::default()).unwrap();
        assert_eq!(r.dag.edge_count(), 0);
        assert!(r.dag.respects_order(&r.order));
    }

    #[test]
    fn xor_child_is_found_with_and_without_refinement() {
        // X2 = X0 xor X1 with 10% noise: no pairwise dependence at all.
        let mut probs = vec![0.0; 8];
        for (c, q) in probs.iter_mut().enumerate() {
            let (a, b, y) = (c & 1, (c >> 1) & 1, (c >> 2) & 1);
            *q = 0.25 * if y == a ^ b { 0.9 } else { 0.1 };
        }
        let data = GeneralParams::new(3, probs).unwrap().sample(4000, 5);
        for refine_order in [true, false] {
            let cfg = SolverConfig { refine_order, ..SolverConfig::default() };
            let r = binotears(&data, &cfg).unwrap();
            assert_eq!(r.dag.edge_count(), 2, "refine_order = {refine_order}");
            assert!(r.dag.respects_order(&r.order));
        }
    }

    #[test]
    fn rejects_single_variable() {
        let d = BinaryDataset::new(1, vec![0, 1]).unwrap();
        assert!(binotears(&d, &SolverConfig::default()).is_err());
    }
}
