// SPDX-License-Identifier: Apache-2.0
//! Sampling-based checks and cross-checks between independent routes to the
//! same quantity.

use mvbdag::learner::{logistic_fit_weighted, population_score, score};
use mvbdag::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_table(p: usize, seed: u64) -> GeneralParams {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    GeneralParams::from_weights(p, (0..1 << p).map(|_| r.random_range(0.05..1.0)).collect()).unwrap()
}

#[test]
fn sampled_frequencies_match_exact_table() {
    // Algorithm-4 sampling against the exact joint law it induces.
    let spec = GraphSpec::new(4, 1, Family::Er, 17).unwrap();
    let gt = GroundTruth::new(random_dag(&spec).unwrap(), InteractionKind::Full, 18).unwrap();
    let n = 1_000_000;
    let data = gt.sample(n, 19);
    let exact = gt.exact.as_ref().unwrap();
    let mut counts = [0usize; 16];
    for (s, c) in data.config_counts().unwrap() {
        counts[s.bits() as usize] = c;
    }
    for (c, &q) in exact.probs().iter().enumerate() {
        let sd = (q * (1.0 - q) / n as f64).sqrt();
        let f = counts[c] as f64 / n as f64;
        assert!((f - q).abs() <= 5.0 * sd, "config {c}: frequency {f}, probability {q}");
    }
}

#[test]
fn population_score_is_the_large_sample_limit() {
    let gp = random_table(3, 3);
    let map = InteractionMap::new(InteractionKind::Full, 3).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(4);
    let mut h = ParamMatrix::zeros(&map).unwrap();
    let free = h.free_mask().to_vec();
    let v: Vec<f64> = free.iter().map(|&f| if f { r.random_range(-1.0..1.0) } else { 0.0 }).collect();
    h.set_values(v).unwrap();
    let data = gp.sample(400_000, 5);
    let pop = population_score(&h, &gp, &map).unwrap();
    let emp = score(&h, &data, &map).unwrap();
    // Per-row losses are bounded by a few nats; 400k rows put the error well
    // under 0.01.
    assert!((pop - emp).abs() < 0.01, "population {pop}, sample {emp}");
}

#[test]
fn weighted_logistic_fit_recovers_conditional_coefficients() {
    let gp = random_table(4, 6);
    let order = [2, 0, 3, 1];
    for pos in 0..4 {
        let exact = gp.conditional_coeffs(&order, pos).unwrap();
        let preds = &order[..pos];
        let node = order[pos];
        let layout = SubsetIndex::new(pos).unwrap();
        let m = layout.len();
        let mask = Subset::from_indices(preds.iter().copied());
        let (mut features, mut labels, mut weights) = (Vec::new(), Vec::new(), Vec::new());
        for (c, &q) in gp.probs().iter().enumerate() {
            let x = Subset::from_bits(c as u64);
            let local = Subset::from_bits(x.bits() & mask.bits()).project(preds).unwrap();
            features.extend(layout.subsets().iter().map(|s| if s.is_subset_of(local) { 1.0 } else { 0.0 }));
            labels.push(u8::from(x.contains(node)));
            weights.push(q);
        }
        let fit = logistic_fit_weighted(&features, m, &labels, &weights, 0.0).unwrap();
        assert!(fit.converged);
        for (a, b) in fit.weights.iter().zip(exact.coeffs()) {
            assert!((a - b).abs() < 1e-6, "pos {pos}: fitted {a}, exact {b}");
        }
    }
}

#[test]
fn empirical_table_recovers_the_population_class() {
    // With plenty of data the minimal class of the empirical table matches
    // the population one for a strong chain.
    let dag = Dag::new(3, &[(0, 1), (1, 2)]).unwrap();
    let gt = GroundTruth::new(dag, InteractionKind::FirstOnly, 21).unwrap();
    let data = gt.sample(200_000, 22);
    let emp = GeneralParams::empirical(&data, 0.0).unwrap();
    let pop = minimal_equivalence_class(&enumerate_equivalence_class(gt.exact.as_ref().unwrap(), 1e-8).unwrap()).unwrap();
    // Sampling noise makes every coefficient nonzero; true strengths are at
    // least 1, noise is a few 1e-4.
    let est = minimal_equivalence_class(&enumerate_equivalence_class(&emp, 0.05).unwrap()).unwrap();
    assert_eq!(Cpdag::from_dag(&est[0].graph), Cpdag::from_dag(&pop[0].graph));
}

#[test]
fn chain_data_gives_chain_cpdag() {
    let dag = Dag::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
    let gt = GroundTruth::new(dag.clone(), InteractionKind::FirstOnly, 31).unwrap();
    let data = gt.sample(10_000, 32);
    let map = InteractionMap::new(InteractionKind::FirstOnly, 4).unwrap();
    let r = solve(ScoreInput::Data(&data), &map, &SolverConfig::default()).unwrap();
    assert_eq!(shd_cpdag(&Cpdag::from_dag(&r.dag), &Cpdag::from_dag(&dag)).unwrap(), 0, "{:?}", r.dag.edges());
}

#[test]
fn solve_in_order_respects_the_order() {
    let gt = GroundTruth::new(Dag::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap(), InteractionKind::Full, 41).unwrap();
    let gp = gt.exact.unwrap();
    let map = InteractionMap::new(InteractionKind::Full, 3).unwrap();
    let order = [2, 1, 0];
    let r = learner::solve_in_order(ScoreInput::Population(&gp), &map, &SolverConfig::default(), &order).unwrap();
    assert!(r.dag.respects_order(&order));
    assert!(r.trace.iter().all(|t| t.acyclicity == 0.0));
}
