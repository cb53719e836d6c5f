// SPDX-License-Identifier: Apache-2.0
//! Browser demo. Build with
//! `cargo build -p mvbdag-web --release --target wasm32-unknown-unknown`
//! and `wasm-bindgen --target web`, then serve `www/`.

use mvbdag::graph::acyclicity_value_and_grad;
use mvbdag::learner::quasi_mcp;
use mvbdag::{binotears, generate, shd_cpdag, Cpdag, Family, GraphSpec, InteractionKind, PenaltyParams, SolverConfig, WeightedAdjacency};
use wasm_bindgen::prelude::*;

/// Penalty values at `points` evenly spaced `t` in `[-t_max, t_max]`.
pub fn penalty_curve(lambda: f64, delta: f64, t_max: f64, points: usize) -> mvbdag::Result<Vec<f64>> {
    let pp = PenaltyParams::new(lambda, delta)?;
    Ok(grid(-t_max, t_max, points).map(|t| quasi_mcp(t, pp).0).collect())
}

/// `h(W)` for `W = [[0, a], [b, 0]]`, `a` and `b` on a `points × points`
/// grid over `[0, w_max]`, rows indexed by `b`.
pub fn two_node_surface(w_max: f64, points: usize) -> mvbdag::Result<Vec<f64>> {
    let mut out = Vec::with_capacity(points * points);
    for b in grid(0.0, w_max, points) {
        for a in grid(0.0, w_max, points) {
            let w = WeightedAdjacency::new(2, vec![0.0, a, b, 0.0])?;
            out.push(acyclicity_value_and_grad(&w)?.0);
        }
    }
    Ok(out)
}

fn grid(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> {
    let step = if points > 1 { (hi - lo) / (points - 1) as f64 } else { 0.0 };
    (0..points).map(move |i| lo + step * i as f64)
}

#[wasm_bindgen]
pub struct Run {
    truth: String,
    estimate: String,
    shd: usize,
}

#[wasm_bindgen]
impl Run {
    /// True DAG as an edge list.
    #[wasm_bindgen(getter)]
    pub fn truth(&self) -> String {
        self.truth.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn estimate(&self) -> String {
        self.estimate.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn shd(&self) -> usize {
        self.shd
    }
}

/// Draws a graph and `n` samples with first+second interactions and learns
/// it back with the two-stage method.
pub fn simulate_and_learn(p: usize, k: usize, family: &str, n: usize, seed: u64) -> mvbdag::Result<Run> {
    let spec = GraphSpec::new(p, k, family.parse::<Family>()?, seed)?;
    let (data, truth) = generate(&spec, n, InteractionKind::FirstSecond, seed.wrapping_add(1))?;
    let cfg = SolverConfig { seed, ..SolverConfig::default() };
    let est = binotears(&data, &cfg)?.dag;
    let shd = shd_cpdag(&Cpdag::from_dag(&est), &Cpdag::from_dag(&truth.graph))?;
    Ok(Run { truth: truth.graph.to_edge_list(), estimate: est.to_edge_list(), shd })
}

fn js(e: mvbdag::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = quasiMcpCurve)]
pub fn quasi_mcp_curve(lambda: f64, delta: f64, t_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    penalty_curve(lambda, delta, t_max, points).map_err(js)
}

#[wasm_bindgen(js_name = acyclicitySurface)]
pub fn acyclicity_surface(w_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    two_node_surface(w_max, points).map_err(js)
}

#[wasm_bindgen(js_name = simulateAndLearn)]
pub fn simulate_and_learn_js(p: usize, k: usize, family: &str, n: usize, seed: u64) -> Result<Run, JsError> {
    simulate_and_learn(p, k, family, n, seed).map_err(js)
}
