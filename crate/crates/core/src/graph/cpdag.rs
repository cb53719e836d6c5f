// SPDX-License-Identifier: Apache-2.0
//! Completed partially directed acyclic graphs and Markov equivalence.

use super::Dag;
use crate::error::{Error, Result};

/// State of one unordered node pair `{a, b}` with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeMark {
    Absent,
    /// `a → b`
    Forward,
    /// `b → a`
    Backward,
    Undirected,
}

/// Essential graph of a Markov equivalence class: compelled edges directed,
/// reversible edges undirected.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cpdag {
    p: usize,
    directed: Vec<bool>,
    undirected: Vec<bool>,
}

impl Cpdag {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn is_directed(&self, from: usize, to: usize) -> bool {
        self.directed[from * self.p + to]
    }

    pub fn is_undirected(&self, a: usize, b: usize) -> bool {
        self.undirected[a * self.p + b]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.is_directed(a, b) || self.is_directed(b, a) || self.is_undirected(a, b)
    }

    pub fn mark(&self, a: usize, b: usize) -> EdgeMark {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let m = if self.is_undirected(lo, hi) {
            EdgeMark::Undirected
        } else if self.is_directed(lo, hi) {
            EdgeMark::Forward
        } else if self.is_directed(hi, lo) {
            EdgeMark::Backward
        } else {
            EdgeMark::Absent
        };
        if a <= b {
            m
        } else {
            match m {
                EdgeMark::Forward => EdgeMark::Backward,
                EdgeMark::Backward => EdgeMark::Forward,
                other => other,
            }
        }
    }

    pub fn directed_edges(&self) -> Vec<(usize, usize)> {
        let p = self.p;
        (0..p * p).filter(|&k| self.directed[k]).map(|k| (k / p, k % p)).collect()
    }

    /// Undirected edges as `(a, b)` with `a < b`.
    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        let p = self.p;
        (0..p * p)
            .filter(|&k| self.undirected[k] && k / p < k % p)
            .map(|k| (k / p, k % p))
            .collect()
    }

    pub fn from_edges(p: usize, directed: &[(usize, usize)], undirected: &[(usize, usize)]) -> Result<Self> {
        let mut g = Cpdag { p, directed: vec![false; p * p], undirected: vec![false; p * p] };
        for &(a, b) in directed.iter().chain(undirected) {
            if a >= p || b >= p || a == b {
                return Err(Error::InvalidInput(format!("invalid edge ({a}, {b}) on {p} nodes")));
            }
            if g.adjacent(a, b) {
                return Err(Error::InvalidInput(format!("pair ({a}, {b}) listed twice")));
            }
            if directed.contains(&(a, b)) {
                g.directed[a * p + b] = true;
            } else {
                g.undirected[a * p + b] = true;
                g.undirected[b * p + a] = true;
            }
        }
        Ok(g)
    }

    /// CPDAG of `g`: keep v-structures, then close under Meek's rules 1–3.
    pub fn from_dag(g: &Dag) -> Cpdag {
        let p = g.p();
        let mut c = Cpdag { p, directed: vec![false; p * p], undirected: vec![false; p * p] };
        for (a, b) in g.edges() {
            c.undirected[a * p + b] = true;
            c.undirected[b * p + a] = true;
        }
        for j in 0..p {
            let pa = g.parents(j);
            for (x, &a) in pa.iter().enumerate() {
                for &b in &pa[x + 1..] {
                    if !g.adjacent(a, b) {
                        c.orient(a, j);
                        c.orient(b, j);
                    }
                }
            }
        }
        c.apply_meek_rules();
        c
    }

    fn orient(&mut self, from: usize, to: usize) {
        let p = self.p;
        self.undirected[from * p + to] = false;
        self.undirected[to * p + from] = false;
        self.directed[from * p + to] = true;
    }

    fn apply_meek_rules(&mut self) {
        let p = self.p;
        loop {
            let mut changed = false;
            for a in 0..p {
                for b in 0..p {
                    if a == b || !self.is_undirected(a, b) {
                        continue;
                    }
                    if self.compelled(a, b) {
                        self.orient(a, b);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Whether the undirected edge `a — b` must be oriented `a → b`.
    fn compelled(&self, a: usize, b: usize) -> bool {
        let p = self.p;
        // R1: c → a — b with c, b nonadjacent.
        let r1 = (0..p).any(|c| c != b && self.is_directed(c, a) && !self.adjacent(c, b));
        if r1 {
            return true;
        }
        // R2: a → c → b with a — b.
        let r2 = (0..p).any(|c| self.is_directed(a, c) && self.is_directed(c, b));
        if r2 {
            return true;
        }
        // R3: a — c → b, a — d → b, c and d nonadjacent.
        let kites: Vec<usize> = (0..p)
            .filter(|&c| c != b && self.is_undirected(a, c) && self.is_directed(c, b))
            .collect();
        kites
            .iter()
            .enumerate()
            .any(|(x, &c)| kites[x + 1..].iter().any(|&d| !self.adjacent(c, d)))
    }
}

/// Markov equivalence: same skeleton and same v-structures.
pub fn markov_equivalent(g1: &Dag, g2: &Dag) -> Result<bool> {
    if g1.p() != g2.p() {
        return Err(Error::DimensionMismatch { expected: g1.p(), found: g2.p() });
    }
    let p = g1.p();
    for a in 0..p {
        for b in a + 1..p {
            if g1.adjacent(a, b) != g2.adjacent(a, b) {
                return Ok(false);
            }
        }
    }
    let v_structures = |g: &Dag| {
        let mut out = Vec::new();
        for j in 0..p {
            let pa = g.parents(j);
            for (x, &a) in pa.iter().enumerate() {
                for &b in &pa[x + 1..] {
                    if !g.adjacent(a, b) {
                        out.push((a, j, b));
                    }
                }
            }
        }
        out
    };
    Ok(v_structures(g1) == v_structures(g2))
}

/// Structural Hamming distance between CPDAGs: the number of unordered pairs
/// whose [`EdgeMark`] differs. An orientation mismatch counts once.
pub fn shd_cpdag(a: &Cpdag, b: &Cpdag) -> Result<usize> {
    if a.p() != b.p() {
        return Err(Error::DimensionMismatch { expected: a.p(), found: b.p() });
    }
    let p = a.p();
    let mut d = 0;
    for x in 0..p {
        for y in x + 1..p {
            if a.mark(x, y) != b.mark(x, y) {
                d += 1;
            }
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dag(p: usize, e: &[(usize, usize)]) -> Dag {
        Dag::new(p, e).unwrap()
    }

    #[test]
    fn single_edge_is_undirected() {
        let c = Cpdag::from_dag(&dag(2, &[(0, 1)]));
        assert_eq!(c.undirected_edges(), vec![(0, 1)]);
        assert!(c.directed_edges().is_empty());
    }

    #[test]
    fn collider_stays_directed() {
        let c = Cpdag::from_dag(&dag(3, &[(0, 1), (2, 1)]));
        assert_eq!(c.directed_edges(), vec![(0, 1), (2, 1)]);
        assert!(c.undirected_edges().is_empty());
    }

    #[test]
    fn chain_is_fully_undirected() {
        let c = Cpdag::from_dag(&dag(3, &[(0, 1), (1, 2)]));
        assert_eq!(c.undirected_edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn rule_one_propagates_below_collider() {
        // 0 → 2 ← 1, 2 → 3: the edge 2 → 3 is compelled.
        let c = Cpdag::from_dag(&dag(4, &[(0, 2), (1, 2), (2, 3)]));
        assert!(c.is_directed(2, 3));
    }

    #[test]
    fn equivalence_examples() {
        assert!(markov_equivalent(&dag(2, &[(0, 1)]), &dag(2, &[(1, 0)])).unwrap());
        let chain = dag(3, &[(0, 1), (1, 2)]);
        let collider = dag(3, &[(0, 1), (2, 1)]);
        assert!(!markov_equivalent(&chain, &collider).unwrap());
        assert!(markov_equivalent(&chain, &chain).unwrap());
        assert!(markov_equivalent(&chain, &dag(2, &[])).is_err());
    }

    #[test]
    fn shd_examples() {
        let chain = Cpdag::from_dag(&dag(3, &[(0, 1), (1, 2)]));
        let collider = Cpdag::from_dag(&dag(3, &[(0, 1), (2, 1)]));
        assert_eq!(shd_cpdag(&chain, &chain).unwrap(), 0);
        assert_eq!(shd_cpdag(&chain, &collider).unwrap(), 2);
        let empty = Cpdag::from_dag(&Dag::empty(2));
        let one = Cpdag::from_dag(&dag(2, &[(0, 1)]));
        assert_eq!(shd_cpdag(&empty, &one).unwrap(), 1);
    }

    /// Pairs oriented identically across every member of a class are exactly
    /// the directed edges of its CPDAG.
    #[test]
    fn cpdag_marks_exactly_the_shared_orientations() {
        for p in 2..=4 {
            let all = Dag::enumerate_all(p);
            for g in &all {
                let class: Vec<&Dag> = all.iter().filter(|h| markov_equivalent(g, h).unwrap()).collect();
                let c = Cpdag::from_dag(g);
                for a in 0..p {
                    for b in 0..p {
                        if a == b || !g.has_edge(a, b) {
                            continue;
                        }
                        let shared = class.iter().all(|h| h.has_edge(a, b));
                        assert_eq!(c.is_directed(a, b), shared, "{g:?} edge {a}->{b}");
                        assert_eq!(c.is_undirected(a, b), !shared);
                    }
                }
            }
        }
    }
}
