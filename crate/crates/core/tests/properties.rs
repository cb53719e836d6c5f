// SPDX-License-Identifier: Apache-2.0
//! Randomized invariants over the public API.

use mvbdag::graph::acyclicity_value_and_grad;
use mvbdag::learner::{population_score, quasi_mcp};
use mvbdag::transform::{mobius, subset_sum};
use mvbdag::*;
use proptest::prelude::*;

fn table(p: usize) -> impl Strategy<Value = GeneralParams> {
    prop::collection::vec(0.02f64..1.0, 1 << p).prop_map(move |w| GeneralParams::from_weights(p, w).unwrap())
}

/// A DAG drawn as a random upper-triangular pattern under a random relabeling.
fn dag(p: usize) -> impl Strategy<Value = Dag> {
    (prop::collection::vec(any::<bool>(), p * (p - 1) / 2), Just((0..p).collect::<Vec<_>>()).prop_shuffle()).prop_map(
        move |(bits, perm)| {
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 0..p {
                for j in i + 1..p {
                    if bits[k] {
                        edges.push((perm[i], perm[j]));
                    }
                    k += 1;
                }
            }
            Dag::new(p, &edges).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mobius_inverts_subset_sum(v in prop::collection::vec(-5.0f64..5.0, 16)) {
        let mut a = v.clone();
        subset_sum(&mut a);
        mobius(&mut a);
        for (x, y) in a.iter().zip(&v) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn natural_round_trip(gp in (1usize..=5).prop_flat_map(table)) {
        let back = gp.to_natural().unwrap().to_general().unwrap();
        for (x, y) in gp.probs().iter().zip(back.probs()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn every_order_reproduces_the_table(gp in (2usize..=4).prop_flat_map(table)) {
        for m in enumerate_equivalence_class(&gp, 1e-8).unwrap() {
            prop_assert!(m.graph.respects_order(&m.order));
            let back = sem_induced_distribution(&m.coeffs, &m.order).unwrap();
            for (x, y) in gp.probs().iter().zip(back.probs()) {
                prop_assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn quasi_mcp_is_even_bounded_monotone(a in 0.0f64..3.0, b in 0.0f64..3.0, lambda in 0.001f64..2.0, delta in 0.001f64..2.0) {
        let pp = PenaltyParams::new(lambda, delta).unwrap();
        let (qa, qb) = (quasi_mcp(a, pp).0, quasi_mcp(b, pp).0);
        prop_assert_eq!(qa, quasi_mcp(-a, pp).0);
        prop_assert!((0.0..=lambda * delta / 2.0 + 1e-15).contains(&qa));
        if a <= b {
            prop_assert!(qa <= qb + 1e-15);
        }
    }

    #[test]
    fn shd_is_a_pseudometric(a in dag(5), b in dag(5), c in dag(5)) {
        let (ca, cb, cc) = (Cpdag::from_dag(&a), Cpdag::from_dag(&b), Cpdag::from_dag(&c));
        let ab = shd_cpdag(&ca, &cb).unwrap();
        prop_assert_eq!(shd_cpdag(&ca, &ca).unwrap(), 0);
        prop_assert_eq!(ab, shd_cpdag(&cb, &ca).unwrap());
        prop_assert!(shd_cpdag(&ca, &cc).unwrap() <= ab + shd_cpdag(&cb, &cc).unwrap());
        prop_assert_eq!(ab == 0, markov_equivalent(&a, &b).unwrap());
    }

    #[test]
    fn cpdag_of_a_dag_contains_it(g in dag(5)) {
        let c = Cpdag::from_dag(&g);
        for (i, j) in g.edges() {
            prop_assert!(c.is_directed(i, j) || c.is_undirected(i, j));
        }
        prop_assert_eq!(c.directed_edges().len() + c.undirected_edges().len(), g.edge_count());
    }

    #[test]
    fn acyclicity_vanishes_exactly_on_dags(w in prop::collection::vec(prop_oneof![Just(0.0), 0.05f64..1.5], 16)) {
        let mut w = w;
        for i in 0..4 {
            w[i * 4 + i] = 0.0;
        }
        let wa = WeightedAdjacency::new(4, w).unwrap();
        let (h, _) = acyclicity_value_and_grad(&wa).unwrap();
        let dag = is_acyclic(&wa);
        prop_assert!(h >= -1e-12);
        prop_assert_eq!(h.abs() < 1e-12, dag);
    }

    #[test]
    fn population_score_is_convex_along_lines(
        gp in table(3),
        x in prop::collection::vec(-1.5f64..1.5, 32),
        d in prop::collection::vec(-1.0f64..1.0, 32),
    ) {
        let map = InteractionMap::new(InteractionKind::Full, 3).unwrap();
        let zero = ParamMatrix::zeros(&map).unwrap();
        let free = zero.free_mask().to_vec();
        let at = |t: f64| {
            let v: Vec<f64> = (0..free.len()).map(|k| if free[k] { x[k % 32] + t * d[k % 32] } else { 0.0 }).collect();
            population_score(&ParamMatrix::from_values(&map, v).unwrap(), &gp, &map).unwrap()
        };
        let t = 0.5;
        let second = at(t) + at(-t) - 2.0 * at(0.0);
        prop_assert!(second > 0.0, "second difference {second}");
    }
}
