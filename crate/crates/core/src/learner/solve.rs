// SPDX-License-Identifier: Apache-2.0
//! Penalty-path solver for the acyclicity-constrained regularized score.
//!
//! Each inner problem minimizes
//! `score(H) + Σ_{i≠j} q_{λ,δ}(W_ij) + (μ/2)·h(W(H))²` over the free entries
//! of `H`. The first round walks the whole `μ` schedule; later rounds shrink
//! `(λ, δ)` by `γ` and re-solve at the last scheduled `μ` from the previous
//! solution. Whenever a round ends with `h(W) > h_tol`, `μ` keeps growing
//! tenfold within that round.
//!
//! The continuous path settles on one variable order early and rarely leaves
//! it. With `order_search` on, the order of its thresholded graph seeds a
//! local search that moves one variable at a time; each visited order is
//! refit with the same continuation restricted to that order. Thresholded
//! candidates are compared by a refit likelihood with a `ln(n)/(2n)` charge
//! per coefficient, ties going to fewer edges.

use std::collections::HashMap;

use rand::Rng;

use super::optim::{minimize, OptimOptions};
use super::params::{induced_entries, pull_back, ParamMatrix, ParamMode};
use super::penalty::{quasi_mcp_smooth_part, PenaltyParams};
use super::score::{penalty_term, LossModel, ScoreInput};
use super::select::{Rank, Selector};
use super::{SolverConfig, TraceRow};
use crate::error::{Error, Result};
use crate::features::InteractionMap;
use crate::graph::{Acyclicity, Dag, WeightedAdjacency};
use crate::rng;
use crate::subset::Subset;

/// Largest `p` for the full-interaction solver.
pub const MAX_FULL_SOLVE_NODES: usize = 12;
/// Largest `p` for the first-order solver.
pub const MAX_LINEAR_SOLVE_NODES: usize = 64;

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub params: ParamMatrix,
    /// `W(H)` before thresholding.
    pub adjacency: WeightedAdjacency,
    /// Thresholded, cycle-free graph.
    pub dag: Dag,
    /// Unpenalized score of `params`.
    pub score: f64,
    pub trace: Vec<TraceRow>,
}

struct Objective<'a> {
    model: &'a LossModel,
    acyclicity: Acyclicity,
    free: &'a [bool],
}

impl Objective<'_> {
    /// Smooth part of the inner objective; the `λ|h|` terms of first-order
    /// mode are handled by the optimizer.
    fn eval(&self, values: &[f64], pp: PenaltyParams, mu: f64, grad: &mut [f64]) -> f64 {
        let (mode, p, rows) = (self.model.mode(), self.model.p(), self.model.rows());
        let mut total = self.model.eval(values, Some(grad));
        match mode {
            ParamMode::Full => total += penalty_term(mode, p, rows, values, pp, Some(grad)),
            ParamMode::FirstOrder => {
                for i in 0..p {
                    for j in 0..p {
                        if i != j {
                            let k = (i + 1) * p + j;
                            let (v, d) = quasi_mcp_smooth_part(values[k], pp);
                            total += v;
                            grad[k] += d;
                        }
                    }
                }
            }
        }
        let w = induced_entries(mode, p, rows, values);
        match self.acyclicity.value_and_grad(p, &w) {
            Ok((h, gw)) => {
                total += 0.5 * mu * h * h;
                let scaled: Vec<f64> = gw.iter().map(|g| mu * h * g).collect();
                pull_back(mode, p, rows, values, &scaled, grad);
            }
            Err(_) => return f64::INFINITY,
        }
        for (g, &f) in grad.iter_mut().zip(self.free) {
            if !f {
                *g = 0.0;
            }
        }
        total
    }

    fn acyclicity_value(&self, values: &[f64]) -> f64 {
        let w = induced_entries(self.model.mode(), self.model.p(), self.model.rows(), values);
        self.acyclicity.value_and_grad(self.model.p(), &w).map(|(h, _)| h).unwrap_or(f64::INFINITY)
    }
}

fn edges_above(model: &LossModel, values: &[f64], tau: f64) -> usize {
    let p = model.p();
    let w = induced_entries(model.mode(), p, model.rows(), values);
    (0..p * p).filter(|&k| k / p != k % p && w[k] > 0.0 && w[k] >= tau).count()
}

/// Entry `(S, j)` can be nonzero in a DAG ordered by `rank` (position of each
/// variable) only when every member of `S` precedes `j`.
fn consistent_with(rank: &[usize], s: Subset, j: usize) -> bool {
    s.iter().all(|i| rank[i] < rank[j])
}

/// Rank of each variable in `order`, checking that it is a permutation.
fn ranks(order: &[usize], p: usize) -> Result<Vec<usize>> {
    if order.len() != p {
        return Err(Error::DimensionMismatch { expected: p, found: order.len() });
    }
    let mut rank = vec![usize::MAX; p];
    for (k, &v) in order.iter().enumerate() {
        if v >= p || rank[v] != usize::MAX {
            return Err(Error::InvalidInput(format!("order {order:?} is not a permutation of 0..{p}")));
        }
        rank[v] = k;
    }
    Ok(rank)
}

struct Path<'a> {
    model: &'a LossModel,
    acyclicity: Acyclicity,
    cfg: &'a SolverConfig,
}

impl Path<'_> {
    /// Continuation over `(λ, δ)` from `values`; round 0 walks `mus`.
    fn run(
        &self,
        mut values: Vec<f64>,
        free: &[bool],
        mus: &[f64],
        path: usize,
        trace: &mut Vec<TraceRow>,
    ) -> Result<Vec<f64>> {
        let (cfg, model) = (self.cfg, self.model);
        let p = model.p();
        let objective = Objective { model, acyclicity: self.acyclicity, free };
        let opts = OptimOptions { max_iter: cfg.max_iter, grad_tol: cfg.grad_tol, ftol: cfg.ftol, memory: cfg.memory };
        let mu_last = *mus.last().expect("nonempty schedule");
        let mut kept: Option<(Vec<f64>, f64)> = None;
        for round in 0..cfg.max_rounds {
            let factor = cfg.gamma.powi(round as i32);
            let pp = PenaltyParams::new(cfg.lambda0 * factor, cfg.delta0 * factor)?;
            let l1: Vec<f64> = match model.mode() {
                ParamMode::Full => vec![0.0; values.len()],
                ParamMode::FirstOrder => (0..values.len())
                    .map(|k| if k >= p && free[k] { pp.lambda() } else { 0.0 })
                    .collect(),
            };
            let mut pending: Vec<f64> = if round == 0 { mus.to_vec() } else { vec![mu_last] };
            pending.reverse();
            while let Some(mu) = pending.pop() {
                let res = minimize(|x, g| objective.eval(x, pp, mu, g), values.clone(), &l1, free, opts);
                let score = res.as_ref().ok().map(|r| model.eval(&r.x, None));
                match (res, score) {
                    (Ok(r), Some(s)) if s.is_finite() && r.x.iter().all(|v| v.is_finite()) => {
                        let (iterations, converged) = (r.iterations, r.converged);
                        values = r.x;
                        let acyclicity = objective.acyclicity_value(&values);
                        trace.push(TraceRow {
                            path,
                            round,
                            lambda: pp.lambda(),
                            delta: pp.delta(),
                            mu,
                            score: s,
                            acyclicity,
                            edges: edges_above(model, &values, cfg.edge_threshold),
                            iterations,
                            converged,
                        });
                        if pending.is_empty() && acyclicity > cfg.h_tol && 10.0 * mu <= cfg.mu_max {
                            pending.push(10.0 * mu);
                        }
                    }
                    _ => {
                        return Err(Error::SolverFailure {
                            reason: format!("non-finite objective on path {path}, round {round}, mu = {mu}"),
                            trace: std::mem::take(trace),
                        })
                    }
                }
            }
            let s = model.eval(&values, None);
            if let Some((prev, prev_score)) = &kept {
                if prev_score - s <= cfg.score_tol {
                    values = prev.clone();
                    break;
                }
            }
            kept = Some((values.clone(), s));
        }
        Ok(values)
    }

    /// The continuation with every entry that disagrees with `order` fixed
    /// at zero; the acyclicity term then vanishes identically.
    fn run_in_order(&self, base_free: &[bool], order: &[usize], path: usize, trace: &mut Vec<TraceRow>) -> Result<Vec<f64>> {
        let (p, rows) = (self.model.p(), self.model.rows());
        let rank = ranks(order, p)?;
        let mut free = base_free.to_vec();
        for (r, s) in rows.iter().enumerate() {
            for j in 0..p {
                if !consistent_with(&rank, *s, j) {
                    free[r * p + j] = false;
                }
            }
        }
        let mu_last = [*self.cfg.mu_schedule.last().expect("validated nonempty")];
        self.run(vec![0.0; base_free.len()], &free, &mu_last, path, trace)
    }
}

fn prepare(input: &ScoreInput<'_>, map: &InteractionMap, cfg: &SolverConfig) -> Result<ParamMatrix> {
    cfg.validate()?;
    let p = map.p();
    if input.p() != p {
        return Err(Error::DimensionMismatch { expected: p, found: input.p() });
    }
    let h = ParamMatrix::zeros(map)?;
    let cap = match h.mode() {
        ParamMode::Full => MAX_FULL_SOLVE_NODES,
        ParamMode::FirstOrder => MAX_LINEAR_SOLVE_NODES,
    };
    if p > cap {
        return Err(Error::Capacity { what: "solver", max: cap, got: p });
    }
    Ok(h)
}

fn finish(mut h: ParamMatrix, values: Vec<f64>, model: &LossModel, cfg: &SolverConfig, trace: Vec<TraceRow>) -> Result<SolveResult> {
    h.set_values(values)?;
    let adjacency = h.induced_adjacency()?;
    let dag = adjacency.to_dag(cfg.edge_threshold);
    let score = model.eval(h.values(), None);
    Ok(SolveResult { params: h, adjacency, dag, score, trace })
}

/// Approximately minimizes the regularized score subject to acyclicity.
pub fn solve(input: ScoreInput<'_>, map: &InteractionMap, cfg: &SolverConfig) -> Result<SolveResult> {
    let mut h = prepare(&input, map, cfg)?;
    let p = map.p();
    let model = LossModel::new(&h, input, map)?;
    let free = h.free_mask().to_vec();
    let path = Path { model: &model, acyclicity: cfg.acyclicity_fn(), cfg };

    let mut init = rng::stream(cfg.seed, rng::SOLVER_INIT_STREAM);
    for (v, &f) in h.values_mut().iter_mut().zip(&free) {
        if f {
            *v = cfg.init_scale * (2.0 * init.random::<f64>() - 1.0);
        }
    }
    let mut trace = Vec::new();
    let values = path.run(h.values().to_vec(), &free, &cfg.mu_schedule, 0, &mut trace)?;
    if !cfg.order_search || p < 2 {
        return finish(h, values, &model, cfg, trace);
    }

    let selector = Selector::new(&input, h.rows())?;
    let dag_of = |values: &[f64]| -> Result<Dag> {
        let mut probe = h.clone();
        probe.set_values(values.to_vec())?;
        Ok(probe.induced_adjacency()?.to_dag(cfg.edge_threshold))
    };
    let start = dag_of(&values)?;
    let mut best = (selector.rank(&start)?, values);

    let mut fits: HashMap<Vec<usize>, Rank> = HashMap::new();
    let mut fit = |order: &[usize], trace: &mut Vec<TraceRow>, best: &mut (Rank, Vec<f64>)| -> Result<Rank> {
        if let Some(r) = fits.get(order) {
            return Ok(*r);
        }
        let values = path.run_in_order(&free, order, fits.len() + 1, trace)?;
        let rank = selector.rank(&dag_of(&values)?)?;
        if rank.better_than(&best.0) {
            *best = (rank, values);
        }
        fits.insert(order.to_vec(), rank);
        Ok(rank)
    };
    let mut climb = |mut current: Vec<usize>, trace: &mut Vec<TraceRow>, best: &mut (Rank, Vec<f64>)| -> Result<(Vec<usize>, Rank)> {
        let mut current_rank = fit(&current, trace, best)?;
        'climb: loop {
            for from in 0..p {
                for to in 0..p {
                    if from == to || to + 1 == from {
                        continue;
                    }
                    let mut cand = current.clone();
                    let v = cand.remove(from);
                    cand.insert(to, v);
                    let r = fit(&cand, trace, best)?;
                    if r.better_than(&current_rank) {
                        current = cand;
                        current_rank = r;
                        continue 'climb;
                    }
                }
            }
            return Ok((current, current_rank));
        }
    };
    let (mut local, mut local_rank) = climb(start.topological_order(), &mut trace, &mut best)?;
    // Restarts from the local optimum with two random moves applied.
    let mut kicks = rng::stream(cfg.seed, rng::SOLVER_ORDER_STREAM);
    for _ in 0..cfg.order_kicks {
        let mut cand = local.clone();
        for _ in 0..2 {
            let v = cand.remove(kicks.random_range(0..p));
            cand.insert(kicks.random_range(0..p), v);
        }
        let (o, r) = climb(cand, &mut trace, &mut best)?;
        if r.better_than(&local_rank) {
            (local, local_rank) = (o, r);
        }
    }
    finish(h, best.1, &model, cfg, trace)
}

/// Runs the continuation schedule with every entry that disagrees with
/// `order` held at zero. `order[0]` is a source.
pub fn solve_in_order(
    input: ScoreInput<'_>,
    map: &InteractionMap,
    cfg: &SolverConfig,
    order: &[usize],
) -> Result<SolveResult> {
    let h = prepare(&input, map, cfg)?;
    let model = LossModel::new(&h, input, map)?;
    let path = Path { model: &model, acyclicity: cfg.acyclicity_fn(), cfg };
    let mut trace = Vec::new();
    let values = path.run_in_order(h.free_mask(), order, 0, &mut trace)?;
    finish(h, values, &model, cfg, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::BinaryDataset;
    use crate::features::InteractionKind;
    use crate::mvb::GeneralParams;

    #[test]
    fn uniform_population_gives_empty_graph() {
        let gp = GeneralParams::uniform(3).unwrap();
        for kind in [InteractionKind::Full, InteractionKind::FirstOnly] {
            let map = InteractionMap::new(kind, 3).unwrap();
            let r = solve(ScoreInput::Population(&gp), &map, &SolverConfig::default()).unwrap();
            assert_eq!(r.dag.edge_count(), 0, "{kind}");
            assert!(!r.trace.is_empty());
        }
    }

    #[test]
    fn dependent_pair_gives_one_edge() {
        let gp = GeneralParams::new(2, vec![0.4, 0.1, 0.1, 0.4]).unwrap();
        let map = InteractionMap::new(InteractionKind::Full, 2).unwrap();
        let r = solve(ScoreInput::Population(&gp), &map, &SolverConfig::default()).unwrap();
        assert_eq!(r.dag.edge_count(), 1);
        let (i, j) = r.dag.edges()[0];
        assert!(r.adjacency.get(j, i) < 0.1 * r.adjacency.get(i, j));
    }

    #[test]
    fn capacity_and_dimension_errors() {
        let map = InteractionMap::new(InteractionKind::Full, 13).unwrap();
        let d = BinaryDataset::new(13, vec![0; 13]).unwrap();
        assert!(matches!(
            solve(ScoreInput::Data(&d), &map, &SolverConfig::default()),
            Err(Error::Capacity { .. })
        ));
        let map = InteractionMap::new(InteractionKind::FirstOnly, 3).unwrap();
        assert!(solve(ScoreInput::Data(&d), &map, &SolverConfig::default()).is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let gp = GeneralParams::new(2, vec![0.4, 0.1, 0.1, 0.4]).unwrap();
        let data = gp.sample(500, 3);
        let map = InteractionMap::new(InteractionKind::FirstOnly, 2).unwrap();
        let cfg = SolverConfig::default();
        let a = solve(ScoreInput::Data(&data), &map, &cfg).unwrap();
        let b = solve(ScoreInput::Data(&data), &map, &cfg).unwrap();
        assert_eq!(a.params, b.params);
        assert_eq!(a.trace, b.trace);
    }
}
