// SPDX-License-Identifier: Apache-2.0
//! Synthetic benchmarks: random DAGs and logistic structural models whose
//! conditionals use a chosen interaction kind over each node's parents.

use std::fmt;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::dataset::BinaryDataset;
use crate::error::{Error, Result};
use crate::features::InteractionKind;
use crate::graph::Dag;
use crate::io::write_string;
use crate::mvb::{sem_induced_distribution, sigmoid, ConditionalCoeffs, GeneralParams};
use crate::rng;
use crate::subset::Subset;

/// Ground truths up to this size carry their exact probability table.
pub const EXACT_TABLE_NODES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Erdős–Rényi.
    Er,
    /// Scale-free by linear preferential attachment.
    Sf,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Er => "ER",
            Family::Sf => "SF",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "er" => Ok(Family::Er),
            "sf" => Ok(Family::Sf),
            _ => Err(Error::InvalidInput(format!("unknown graph family '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphSpec {
    pub p: usize,
    /// Expected edges per node.
    pub k: usize,
    pub family: Family,
    pub seed: u64,
}

impl GraphSpec {
    pub fn new(p: usize, k: usize, family: Family, seed: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidInput(format!("need at least 2 nodes, got {p}")));
        }
        if k < 1 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        Ok(GraphSpec { p, k, family, seed })
    }
}

/// Random DAG with about `k·p` edges.
///
/// ER includes each unordered pair with probability `min(1, kp / C(p,2))` and
/// orients along a uniform random permutation; asking for more than
/// `p(p-1)` edges is rejected. SF adds nodes one at a time, each attaching to
/// `min(k, t)` earlier nodes drawn with probability proportional to degree
/// plus one, edges pointing from old to new; labels are then shuffled.
pub fn random_dag(spec: &GraphSpec) -> Result<Dag> {
    let GraphSpec { p, k, family, seed } = *spec;
    if p < 2 || k < 1 {
        return Err(Error::InvalidInput(format!("invalid graph spec p={p}, k={k}")));
    }
    let mut r = rng::stream(seed, rng::GRAPH_STREAM);
    let mut perm: Vec<usize> = (0..p).collect();
    perm.shuffle(&mut r);
    let mut edges = Vec::new();
    match family {
        Family::Er => {
            let pairs = (p * (p - 1) / 2) as f64;
            let want = (k * p) as f64;
            if k * p > p * (p - 1) {
                return Err(Error::InfeasibleDensity { edges: k * p, nodes: p });
            }
            let prob = (want / pairs).min(1.0);
            for a in 0..p {
                for b in a + 1..p {
                    if r.random_bool(prob) {
                        edges.push((perm[a], perm[b]));
                    }
                }
            }
        }
        Family::Sf => {
            let mut degree = vec![0usize; p];
            for t in 1..p {
                let mut chosen: Vec<usize> = Vec::new();
                while chosen.len() < k.min(t) {
                    let total: usize = (0..t).filter(|v| !chosen.contains(v)).map(|v| degree[v] + 1).sum();
                    let mut u = r.random_range(0..total);
                    let pick = (0..t)
                        .filter(|v| !chosen.contains(v))
                        .find(|&v| {
                            let w = degree[v] + 1;
                            if u < w {
                                true
                            } else {
                                u -= w;
                                false
                            }
                        })
                        .expect("total weight covers the draw");
                    chosen.push(pick);
                }
                for &v in &chosen {
                    degree[v] += 1;
                    degree[t] += 1;
                    edges.push((perm[v], perm[t]));
                }
            }
        }
    }
    Dag::new(p, &edges)
}

/// Logistic weights of one node: `logit P(X_j = 1 | pa) = Σ w_S Π_{i∈S} x_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeWeights {
    pub parents: Vec<usize>,
    /// `(S, w_S)` with `S` a set of parent labels; `∅` is the intercept.
    pub terms: Vec<(Subset, f64)>,
}

impl NodeWeights {
    pub fn logit(&self, x: Subset) -> f64 {
        self.terms.iter().filter(|(s, _)| s.is_subset_of(x)).map(|(_, w)| w).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroundTruth {
    pub graph: Dag,
    pub kind: InteractionKind,
    /// Topological order used for sampling.
    pub order: Vec<usize>,
    /// Indexed by node.
    pub weights: Vec<NodeWeights>,
    /// Exact joint law when `p ≤ EXACT_TABLE_NODES`.
    pub exact: Option<GeneralParams>,
}

/// `Unif([-2, -1] ∪ [1, 2])`.
fn signed_weight<R: Rng>(r: &mut R) -> f64 {
    let m = r.random_range(1.0..=2.0);
    if r.random_bool(0.5) {
        m
    } else {
        -m
    }
}

impl GroundTruth {
    /// Draws weights for the active monomials of `kind` over each node's
    /// parents; inactive monomials get no weight.
    pub fn new(graph: Dag, kind: InteractionKind, seed: u64) -> Result<Self> {
        let p = graph.p();
        if p > 64 {
            return Err(Error::Capacity { what: "ground truth", max: 64, got: p });
        }
        let weights: Vec<NodeWeights> = (0..p)
            .map(|j| {
                let parents = graph.parents(j);
                let mut r = rng::stream(seed, rng::weight_stream(j));
                let terms = kind
                    .active_subsets(parents.len())
                    .into_iter()
                    .map(|local| (local.lift(&parents), signed_weight(&mut r)))
                    .collect();
                NodeWeights { parents, terms }
            })
            .collect();
        let order = graph.topological_order();
        let mut gt = GroundTruth { graph, kind, order, weights, exact: None };
        if p <= EXACT_TABLE_NODES {
            gt.exact = Some(sem_induced_distribution(&gt.conditional_coeffs()?, &gt.order)?);
        }
        Ok(gt)
    }

    pub fn p(&self) -> usize {
        self.graph.p()
    }

    /// Coefficients in the form used by the exact-recovery routines, one
    /// block per position of `order`.
    pub fn conditional_coeffs(&self) -> Result<Vec<ConditionalCoeffs>> {
        let p = self.p();
        (0..p)
            .map(|pos| {
                let preds = &self.order[..pos];
                let idx = crate::subset::SubsetIndex::shared(pos)?;
                let mut coeffs = vec![0.0; 1 << pos];
                for (s, w) in &self.weights[self.order[pos]].terms {
                    let local = s.project(preds).expect("parents precede the node");
                    coeffs[idx.position_of(local)?] += w;
                }
                ConditionalCoeffs::new(self.order.clone(), pos, coeffs)
            })
            .collect()
    }

    /// `n` rows by ancestral sampling; deterministic given `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> BinaryDataset {
        let p = self.p();
        let mut rows = vec![Subset::EMPTY; n];
        for &j in &self.order {
            let mut r = rng::stream(seed, rng::draw_stream(j));
            let w = &self.weights[j];
            for x in rows.iter_mut() {
                let q = sigmoid(w.logit(*x));
                if r.random::<f64>() < q {
                    *x = x.with(j);
                }
            }
        }
        BinaryDataset::from_masks(p, &rows)
    }

    /// CSV with one row per weight: `node,term,weight`, labels 1-based,
    /// `term` a space-separated set or `intercept`.
    pub fn weights_csv(&self) -> String {
        let mut s = String::from("# mvbdag weights v1\nnode,term,weight\n");
        for (j, nw) in self.weights.iter().enumerate() {
            for (t, w) in &nw.terms {
                let term = if t.is_empty() {
                    "intercept".to_string()
                } else {
                    t.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ")
                };
                let _ = writeln!(s, "{},{term},{w}", j + 1);
            }
        }
        s
    }

    /// Writes `<prefix>graph.txt`, `<prefix>weights.csv` and, when known,
    /// `<prefix>params.csv` into `dir`.
    pub fn write(&self, dir: &Path, prefix: &str) -> Result<()> {
        self.graph.write_edge_list(&dir.join(format!("{prefix}graph.txt")))?;
        write_string(&dir.join(format!("{prefix}weights.csv")), &self.weights_csv())?;
        if let Some(gp) = &self.exact {
            gp.write(&dir.join(format!("{prefix}params.csv")))?;
        }
        Ok(())
    }
}

/// Random graph, weights and `n` samples. Graph randomness comes from
/// `spec.seed`; weights and draws from `seed`.
pub fn generate(spec: &GraphSpec, n: usize, kind: InteractionKind, seed: u64) -> Result<(BinaryDataset, GroundTruth)> {
    let gt = GroundTruth::new(random_dag(spec)?, kind, seed)?;
    Ok((gt.sample(n, seed), gt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_acyclic;

    #[test]
    fn two_nodes_er_saturates() {
        for seed in 0..20 {
            let g = random_dag(&GraphSpec::new(2, 1, Family::Er, seed).unwrap()).unwrap();
            assert_eq!(g.edge_count(), 1);
        }
    }

    #[test]
    fn infeasible_density_is_rejected() {
        let spec = GraphSpec::new(4, 4, Family::Er, 0).unwrap();
        assert!(matches!(random_dag(&spec), Err(Error::InfeasibleDensity { .. })));
    }

    #[test]
    fn graphs_are_acyclic_and_deterministic() {
        for family in [Family::Er, Family::Sf] {
            for seed in 0..30 {
                let spec = GraphSpec::new(9, 2, family, seed).unwrap();
                let g = random_dag(&spec).unwrap();
                assert!(is_acyclic(&g));
                assert_eq!(g, random_dag(&spec).unwrap());
            }
        }
    }

    #[test]
    fn sf_edge_count_is_exact() {
        // Node t attaches to min(k, t) earlier nodes.
        let g = random_dag(&GraphSpec::new(10, 2, Family::Sf, 4).unwrap()).unwrap();
        assert_eq!(g.edge_count(), 1 + 2 * 8);
    }

    #[test]
    fn weights_cover_active_terms_only() {
        let g = Dag::new(3, &[(0, 2), (1, 2)]).unwrap();
        let gt = GroundTruth::new(g, InteractionKind::PthOnly, 5).unwrap();
        let terms: Vec<Subset> = gt.weights[2].terms.iter().map(|t| t.0).collect();
        assert_eq!(terms, vec![Subset::EMPTY, Subset::from_indices([0, 1])]);
        for nw in &gt.weights {
            assert!(nw.terms.iter().all(|(_, w)| (1.0..=2.0).contains(&w.abs())));
        }
    }

    #[test]
    fn exact_table_matches_direct_product() {
        let g = Dag::new(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let gt = GroundTruth::new(g, InteractionKind::FirstSecond, 9).unwrap();
        let exact = gt.exact.as_ref().unwrap();
        assert!(exact.strictly_positive());
        for c in 0..16u64 {
            let x = Subset::from_bits(c);
            let direct: f64 = (0..4)
                .map(|j| {
                    let q = sigmoid(gt.weights[j].logit(x));
                    if x.contains(j) {
                        q
                    } else {
                        1.0 - q
                    }
                })
                .product();
            assert!((exact.prob(x) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let spec = GraphSpec::new(5, 1, Family::Er, 3).unwrap();
        let (a, ga) = generate(&spec, 200, InteractionKind::FirstSecond, 8).unwrap();
        let (b, gb) = generate(&spec, 200, InteractionKind::FirstSecond, 8).unwrap();
        assert_eq!(a, b);
        assert_eq!(ga, gb);
    }
}
