// SPDX-License-Identifier: Apache-2.0
//! Population-level recovery by enumerating topological orders.
//!
//! For a strictly positive law and an order `π`, the conditional of each node
//! given its predecessors is logistic in the full monomial basis; a
//! predecessor is a parent iff some coefficient involving it is nonzero. The
//! resulting `(coeffs, graph)` reproduces the law exactly for every order, and
//! the sparsest such graphs form the minimal class.

use std::fmt::Write as _;
use std::path::Path;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::Dag;
use crate::io::write_string;
use crate::mvb::{check_permutation, ConditionalCoeffs, GeneralParams};

/// Default threshold on `Σ_{S ∋ i} f²` for declaring an edge.
pub const DEFAULT_EDGE_TOL: f64 = 1e-8;

/// Largest `p` accepted by [`enumerate_equivalence_class`].
pub const MAX_ENUMERATION_NODES: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct RecoveredModel {
    pub order: Vec<usize>,
    pub graph: Dag,
    /// One block per position of `order`.
    pub coeffs: Vec<ConditionalCoeffs>,
}

impl RecoveredModel {
    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }
}

/// Parents of `order[pos]` among its predecessors, with the coefficients.
pub fn recover_parents(
    gp: &GeneralParams,
    order: &[usize],
    pos: usize,
    tol: f64,
) -> Result<(Vec<usize>, ConditionalCoeffs)> {
    let c = gp.conditional_coeffs(order, pos)?;
    let parents = c
        .predecessors()
        .iter()
        .copied()
        .filter(|&i| c.interaction_strength(i) > tol)
        .collect();
    Ok((parents, c))
}

pub fn recover_dag(gp: &GeneralParams, order: &[usize], tol: f64) -> Result<RecoveredModel> {
    check_permutation(order, gp.p())?;
    let mut graph = Dag::empty(gp.p());
    let mut coeffs = Vec::with_capacity(gp.p());
    for pos in 0..gp.p() {
        let (parents, c) = recover_parents(gp, order, pos, tol)?;
        for i in parents {
            graph.try_add_edge(i, order[pos]).expect("edges follow the order");
        }
        coeffs.push(c);
    }
    Ok(RecoveredModel { order: order.to_vec(), graph, coeffs })
}

/// One model per permutation, in lexicographic order of the permutations.
pub fn enumerate_equivalence_class(gp: &GeneralParams, tol: f64) -> Result<Vec<RecoveredModel>> {
    let p = gp.p();
    if p > MAX_ENUMERATION_NODES {
        return Err(Error::Capacity { what: "order enumeration", max: MAX_ENUMERATION_NODES, got: p });
    }
    if !gp.strictly_positive() {
        let config = gp.probs().iter().position(|&v| v <= 0.0).unwrap_or(0);
        return Err(Error::Positivity { config });
    }
    let orders: Vec<Vec<usize>> = (0..p).permutations(p).collect();
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        orders.par_iter().map(|o| recover_dag(gp, o, tol)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        orders.iter().map(|o| recover_dag(gp, o, tol)).collect()
    }
}

/// Members with the fewest edges, in input order.
pub fn minimal_equivalence_class(models: &[RecoveredModel]) -> Result<Vec<RecoveredModel>> {
    let min = models
        .iter()
        .map(RecoveredModel::edge_count)
        .min()
        .ok_or_else(|| Error::InvalidInput("empty equivalence class".into()))?;
    Ok(models.iter().filter(|m| m.edge_count() == min).cloned().collect())
}

/// Header line of the enumeration manifest.
pub const MANIFEST_HEADER: &str = "# mvbdag enumerate manifest v1";

/// Writes `graph_<rank>.txt` per model and `manifest.csv` into `dir`.
pub fn write_class(models: &[RecoveredModel], dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let min = models.iter().map(RecoveredModel::edge_count).min().unwrap_or(0);
    let width = models.len().to_string().len().max(2);
    let mut manifest = format!("{MANIFEST_HEADER}\nrank,permutation,edges,minimal,file\n");
    for (rank, m) in models.iter().enumerate() {
        let file = format!("graph_{rank:0width$}.txt");
        m.graph.write_edge_list(&dir.join(&file))?;
        let perm = m.order.iter().map(|v| (v + 1).to_string()).join(" ");
        let _ = writeln!(manifest, "{rank},{perm},{},{},{file}", m.edge_count(), m.edge_count() == min);
    }
    write_string(&dir.join("manifest.csv"), &manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::markov_equivalent;
    use crate::mvb::sem_induced_distribution;

    fn chain_gp() -> GeneralParams {
        // 0 → 1 → 2 with strong effects.
        let order = vec![0, 1, 2];
        let c = vec![
            ConditionalCoeffs::new(order.clone(), 0, vec![0.3]).unwrap(),
            ConditionalCoeffs::new(order.clone(), 1, vec![-1.0, 2.0]).unwrap(),
            ConditionalCoeffs::new(order.clone(), 2, vec![1.0, 0.0, -2.5, 0.0]).unwrap(),
        ];
        sem_induced_distribution(&c, &order).unwrap()
    }

    #[test]
    fn independent_law_has_no_parents() {
        let gp = GeneralParams::from_weights(2, vec![0.3 * 0.6, 0.7 * 0.6, 0.3 * 0.4, 0.7 * 0.4]).unwrap();
        for order in [[0, 1], [1, 0]] {
            let m = recover_dag(&gp, &order, DEFAULT_EDGE_TOL).unwrap();
            assert_eq!(m.edge_count(), 0);
        }
    }

    #[test]
    fn dependent_pair_gives_one_edge_each_way() {
        let gp = GeneralParams::new(2, vec![0.4, 0.1, 0.1, 0.4]).unwrap();
        let (pa, _) = recover_parents(&gp, &[1, 0], 1, DEFAULT_EDGE_TOL).unwrap();
        assert_eq!(pa, vec![1]);
        assert_eq!(recover_parents(&gp, &[1, 0], 0, DEFAULT_EDGE_TOL).unwrap().0, Vec::<usize>::new());
        let a = recover_dag(&gp, &[0, 1], DEFAULT_EDGE_TOL).unwrap();
        let b = recover_dag(&gp, &[1, 0], DEFAULT_EDGE_TOL).unwrap();
        assert_eq!(a.graph.edges(), vec![(0, 1)]);
        assert_eq!(b.graph.edges(), vec![(1, 0)]);
    }

    #[test]
    fn chain_recovered_in_its_own_order() {
        let m = recover_dag(&chain_gp(), &[0, 1, 2], DEFAULT_EDGE_TOL).unwrap();
        assert_eq!(m.graph.edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn every_order_reproduces_the_law() {
        let gp = chain_gp();
        let class = enumerate_equivalence_class(&gp, DEFAULT_EDGE_TOL).unwrap();
        assert_eq!(class.len(), 6);
        for m in &class {
            assert!(m.graph.respects_order(&m.order));
            let back = sem_induced_distribution(&m.coeffs, &m.order).unwrap();
            for (a, b) in back.probs().iter().zip(gp.probs()) {
                assert!((a - b).abs() <= 1e-10);
            }
        }
        let orders: Vec<_> = class.iter().map(|m| m.order.clone()).collect();
        let mut sorted = orders.clone();
        sorted.sort();
        assert_eq!(orders, sorted);
    }

    #[test]
    fn chain_minimal_class_is_one_mec() {
        let class = enumerate_equivalence_class(&chain_gp(), DEFAULT_EDGE_TOL).unwrap();
        let min = minimal_equivalence_class(&class).unwrap();
        assert!(min.iter().all(|m| m.edge_count() == 2));
        for m in &min {
            assert!(markov_equivalent(&m.graph, &min[0].graph).unwrap());
        }
        // Every order except the two that place 1 after both 0 and 2.
        assert_eq!(min.len(), 4);
    }

    #[test]
    fn minimal_selection() {
        assert!(minimal_equivalence_class(&[]).is_err());
        let gp = GeneralParams::uniform(3).unwrap();
        let class = enumerate_equivalence_class(&gp, DEFAULT_EDGE_TOL).unwrap();
        assert!(class.iter().all(|m| m.edge_count() == 0));
        assert_eq!(minimal_equivalence_class(&class).unwrap().len(), 6);
    }

    #[test]
    fn raising_tolerance_never_adds_edges() {
        let gp = chain_gp();
        let order = [2, 0, 1];
        let mut last = usize::MAX;
        for tol in [0.0, 1e-8, 1e-3, 0.1, 1.0, 10.0, 1e3] {
            let m = recover_dag(&gp, &order, tol).unwrap();
            assert!(m.edge_count() <= last);
            last = m.edge_count();
        }
    }

    #[test]
    fn capacity_and_positivity_errors() {
        let gp = GeneralParams::uniform(9).unwrap();
        assert!(matches!(enumerate_equivalence_class(&gp, 1e-8), Err(Error::Capacity { .. })));
        let gp = GeneralParams::new(2, vec![0.5, 0.5, 0.0, 0.0]).unwrap();
        assert!(matches!(enumerate_equivalence_class(&gp, 1e-8), Err(Error::Positivity { .. })));
    }

    #[test]
    fn manifest_lists_every_order() {
        let dir = tempfile::tempdir().unwrap();
        let class = enumerate_equivalence_class(&chain_gp(), DEFAULT_EDGE_TOL).unwrap();
        write_class(&class, dir.path()).unwrap();
        let text = std::fs::read_to_string(dir.path().join("manifest.csv")).unwrap();
        let rows: Vec<&str> = text.lines().skip(2).collect();
        assert_eq!(rows.len(), 6);
        assert!(rows[0].starts_with("0,1 2 3,2,true,graph_00.txt"));
        assert_eq!(rows.iter().filter(|r| r.contains(",true,")).count(), 4);
        let g = Dag::read_edge_list(&dir.path().join("graph_00.txt"), None).unwrap();
        assert_eq!(g, class[0].graph);
    }
}
