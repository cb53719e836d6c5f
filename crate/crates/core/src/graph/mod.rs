// SPDX-License-Identifier: Apache-2.0
//! Directed graphs over `p` nodes: DAGs, weighted adjacency matrices,
//! acyclicity functions, CPDAGs and the structural Hamming distance.

mod acyclicity;
mod cpdag;
pub mod expm;
mod io;

pub use acyclicity::{acyclicity_value_and_grad, Acyclicity};
pub use cpdag::{markov_equivalent, shd_cpdag, Cpdag, EdgeMark};

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Read-only view of a directed edge pattern.
pub trait Adjacency {
    fn node_count(&self) -> usize;
    fn has_edge(&self, from: usize, to: usize) -> bool;
}

/// Kahn's algorithm over the pattern; `None` when a cycle exists. Among
/// ready nodes the one with the largest `priority` goes first.
fn topo_sort<A: Adjacency + ?Sized>(g: &A, priority: &dyn Fn(usize) -> f64) -> Option<Vec<usize>> {
    let p = g.node_count();
    let mut indeg = vec![0usize; p];
    for i in 0..p {
        for j in 0..p {
            if i != j && g.has_edge(i, j) {
                indeg[j] += 1;
            }
        }
    }
    let mut ready: Vec<usize> = (0..p).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(p);
    while !ready.is_empty() {
        let best = (0..ready.len())
            .max_by(|&a, &b| {
                priority(ready[a])
                    .total_cmp(&priority(ready[b]))
                    .then_with(|| ready[b].cmp(&ready[a]))
            })
            .expect("nonempty");
        let v = ready.swap_remove(best);
        order.push(v);
        for j in 0..p {
            if j != v && g.has_edge(v, j) {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    ready.push(j);
                }
            }
        }
    }
    (order.len() == p).then_some(order)
}

/// True iff the edge pattern has no directed cycle (self-loops count).
pub fn is_acyclic<A: Adjacency + ?Sized>(g: &A) -> bool {
    (0..g.node_count()).all(|i| !g.has_edge(i, i)) && topo_sort(g, &|_| 0.0).is_some()
}

/// A directed acyclic graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dag {
    p: usize,
    adj: Vec<bool>,
}

impl Adjacency for Dag {
    fn node_count(&self) -> usize {
        self.p
    }

    fn has_edge(&self, from: usize, to: usize) -> bool {
        self.adj[from * self.p + to]
    }
}

impl Dag {
    pub fn empty(p: usize) -> Self {
        Dag { p, adj: vec![false; p * p] }
    }

    /// Builds a DAG from 0-based `(from, to)` pairs.
    pub fn new(p: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Dag::empty(p);
        for &(i, j) in edges {
            if i >= p || j >= p {
                return Err(Error::InvalidInput(format!("edge ({i}, {j}) outside {p} nodes")));
            }
            if i == j {
                return Err(Error::InvalidInput(format!("self-loop on node {i}")));
            }
            g.adj[i * p + j] = true;
        }
        if !is_acyclic(&g) {
            return Err(Error::Cyclic);
        }
        Ok(g)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.adj[from * self.p + to]
    }

    /// Edges sorted by `(from, to)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let p = self.p;
        (0..p * p).filter(|&k| self.adj[k]).map(|k| (k / p, k % p)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&e| e).count()
    }

    pub fn parents(&self, j: usize) -> Vec<usize> {
        (0..self.p).filter(|&i| self.has_edge(i, j)).collect()
    }

    pub fn children(&self, i: usize) -> Vec<usize> {
        (0..self.p).filter(|&j| self.has_edge(i, j)).collect()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.has_edge(a, b) || self.has_edge(b, a)
    }

    /// A topological order, smallest label first among ties.
    pub fn topological_order(&self) -> Vec<usize> {
        let p = self.p;
        topo_sort(self, &|v| (p - v) as f64).expect("a Dag is acyclic")
    }

    /// A topological order, larger `priority` first among ties.
    pub fn topological_order_by(&self, priority: &dyn Fn(usize) -> f64) -> Vec<usize> {
        topo_sort(self, priority).expect("a Dag is acyclic")
    }

    /// True iff every edge points forward in `order`.
    pub fn respects_order(&self, order: &[usize]) -> bool {
        let mut rank = vec![usize::MAX; self.p];
        for (r, &v) in order.iter().enumerate() {
            if v < self.p {
                rank[v] = r;
            }
        }
        self.edges().iter().all(|&(i, j)| rank[i] < rank[j])
    }

    /// Adds `from → to` unless it would close a cycle.
    pub fn try_add_edge(&mut self, from: usize, to: usize) -> Result<()> {
        if from == to {
            return Err(Error::InvalidInput(format!("self-loop on node {from}")));
        }
        if self.reaches(to, from) {
            return Err(Error::Cyclic);
        }
        self.adj[from * self.p + to] = true;
        Ok(())
    }

    pub fn remove_edge(&mut self, from: usize, to: usize) {
        self.adj[from * self.p + to] = false;
    }

    /// True iff a directed path leads from `a` to `b`.
    pub fn reaches(&self, a: usize, b: usize) -> bool {
        let mut seen = vec![false; self.p];
        let mut queue = VecDeque::from([a]);
        seen[a] = true;
        while let Some(v) = queue.pop_front() {
            if v == b {
                return true;
            }
            for w in 0..self.p {
                if self.has_edge(v, w) && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        false
    }

    /// Dense 0/1 adjacency as a weighted matrix.
    pub fn to_weighted(&self) -> WeightedAdjacency {
        WeightedAdjacency {
            p: self.p,
            entries: self.adj.iter().map(|&e| if e { 1.0 } else { 0.0 }).collect(),
        }
    }

    /// Every DAG on `p` nodes (feasible for `p ≤ 4`, 543 graphs at `p = 4`).
    pub fn enumerate_all(p: usize) -> Vec<Dag> {
        let pairs: Vec<(usize, usize)> = (0..p).flat_map(|i| (i + 1..p).map(move |j| (i, j))).collect();
        let mut out = Vec::new();
        // Each unordered pair is absent, forward, or backward.
        let total = 3usize.pow(pairs.len() as u32);
        for code in 0..total {
            let mut c = code;
            let mut g = Dag::empty(p);
            for &(i, j) in &pairs {
                match c % 3 {
                    1 => g.adj[i * p + j] = true,
                    2 => g.adj[j * p + i] = true,
                    _ => {}
                }
                c /= 3;
            }
            if is_acyclic(&g) {
                out.push(g);
            }
        }
        out
    }
}

/// Nonnegative `p × p` matrix with zero diagonal, row-major; entry `(i, j)`
/// weighs the edge `i → j`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedAdjacency {
    p: usize,
    entries: Vec<f64>,
}

impl Adjacency for WeightedAdjacency {
    fn node_count(&self) -> usize {
        self.p
    }

    fn has_edge(&self, from: usize, to: usize) -> bool {
        self.entries[from * self.p + to] != 0.0
    }
}

impl WeightedAdjacency {
    pub fn new(p: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != p * p {
            return Err(Error::DimensionMismatch { expected: p * p, found: entries.len() });
        }
        for (k, &v) in entries.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::Domain(format!("entry ({}, {}) is not finite", k / p, k % p)));
            }
            if v < 0.0 {
                return Err(Error::InvalidParameter(format!("entry ({}, {}) is negative", k / p, k % p)));
            }
        }
        if let Some(i) = (0..p).find(|&i| entries[i * p + i] != 0.0) {
            return Err(Error::InvalidParameter(format!("diagonal entry {i} is nonzero")));
        }
        Ok(WeightedAdjacency { p, entries })
    }

    pub fn zeros(p: usize) -> Self {
        WeightedAdjacency { p, entries: vec![0.0; p * p] }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.p + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Edges with weight at least `tau`, as a possibly cyclic list.
    pub fn edges_above(&self, tau: f64) -> Vec<(usize, usize, f64)> {
        let p = self.p;
        (0..p * p)
            .filter(|&k| self.entries[k] > 0.0 && self.entries[k] >= tau)
            .map(|k| (k / p, k % p, self.entries[k]))
            .collect()
    }

    /// Keeps entries `≥ tau` and removes the weakest edge of any remaining
    /// directed cycle until the result is acyclic.
    pub fn to_dag(&self, tau: f64) -> Dag {
        let p = self.p;
        let mut kept = self.clone();
        for v in kept.entries.iter_mut() {
            if *v < tau {
                *v = 0.0;
            }
        }
        while let Some(cycle) = find_cycle(&kept) {
            let (a, b) = cycle
                .iter()
                .copied()
                .min_by(|&(a, b), &(c, d)| kept.get(a, b).total_cmp(&kept.get(c, d)))
                .expect("cycles are nonempty");
            kept.entries[a * p + b] = 0.0;
        }
        Dag {
            p,
            adj: kept.entries.iter().map(|&v| v != 0.0).collect(),
        }
    }
}

/// Edges of one directed cycle, if any.
fn find_cycle<A: Adjacency>(g: &A) -> Option<Vec<(usize, usize)>> {
    let p = g.node_count();
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; p];
    let mut parent = vec![usize::MAX; p];
    for root in 0..p {
        if state[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        state[root] = 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next == p {
                state[v] = 2;
                stack.pop();
                continue;
            }
            let w = *next;
            *next += 1;
            if !g.has_edge(v, w) {
                continue;
            }
            match state[w] {
                0 => {
                    state[w] = 1;
                    parent[w] = v;
                    stack.push((w, 0));
                }
                1 => {
                    let mut edges = vec![(v, w)];
                    let mut u = v;
                    while u != w {
                        edges.push((parent[u], u));
                        u = parent[u];
                    }
                    return Some(edges);
                }
                _ => {}
            }
        }
    }
    None
}
