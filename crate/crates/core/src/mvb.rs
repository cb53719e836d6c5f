// SPDX-License-Identifier: Apache-2.0
//! The multivariate Bernoulli distribution in its general (probability
//! table) and natural (log-linear) parameterizations.
//!
//! A table entry is addressed by configuration index `c(x) = Σ_j x_j 2^j`
//! (0-based variables). Natural coefficients `f^S` are stored in
//! graded-lexicographic order of `S`, see [`SubsetIndex`].

use std::io::{BufRead, Write};
use std::path::Path;

use rand::Rng;

use crate::dataset::BinaryDataset;
use crate::error::{Error, Result};
use crate::rng;
use crate::subset::{Subset, SubsetIndex, MAX_TABLE_NODES};
use crate::transform;

const SUM_TOL: f64 = 1e-8;

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + e^z)` without overflow.
pub(crate) fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

fn check_table_p(p: usize) -> Result<()> {
    if p > MAX_TABLE_NODES {
        Err(Error::Capacity { what: "probability table", max: MAX_TABLE_NODES, got: p })
    } else {
        Ok(())
    }
}

/// Checks that `order` is a permutation of `0..p`.
pub(crate) fn check_permutation(order: &[usize], p: usize) -> Result<()> {
    if order.len() != p {
        return Err(Error::DimensionMismatch { expected: p, found: order.len() });
    }
    let mut seen = vec![false; p];
    for &v in order {
        if v >= p || std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidInput(format!("{order:?} is not a permutation of 0..{p}")));
        }
    }
    Ok(())
}

/// Probability mass over all `2^p` binary configurations.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralParams {
    p: usize,
    probs: Vec<f64>,
}

impl GeneralParams {
    /// Validates and renormalises a table. Entries must be finite and
    /// nonnegative and sum to one within `1e-8`.
    pub fn new(p: usize, probs: Vec<f64>) -> Result<Self> {
        check_table_p(p)?;
        if probs.len() != 1 << p {
            return Err(Error::DimensionMismatch { expected: 1 << p, found: probs.len() });
        }
        if let Some(c) = probs.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Domain(format!("probability of configuration {c} is {}", probs[c])));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::Domain(format!("probabilities sum to {total}, not 1")));
        }
        Ok(GeneralParams { p, probs: probs.into_iter().map(|v| v / total).collect() })
    }

    /// Like [`GeneralParams::new`] but accepts any positive total mass.
    pub fn from_weights(p: usize, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::Domain(format!("weights sum to {total}")));
        }
        Self::new(p, weights.into_iter().map(|w| w / total).collect())
    }

    pub fn uniform(p: usize) -> Result<Self> {
        check_table_p(p)?;
        let n = 1usize << p;
        Ok(GeneralParams { p, probs: vec![1.0 / n as f64; n] })
    }

    pub fn point_mass(p: usize, x: Subset) -> Result<Self> {
        check_table_p(p)?;
        if !x.is_subset_of(Subset::full(p)) {
            return Err(Error::InvalidSubset(format!("configuration outside {p} variables")));
        }
        let mut probs = vec![0.0; 1 << p];
        probs[x.bits() as usize] = 1.0;
        Ok(GeneralParams { p, probs })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Table in configuration-index order.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, x: Subset) -> f64 {
        self.probs[x.bits() as usize]
    }

    pub fn strictly_positive(&self) -> bool {
        self.probs.iter().all(|&v| v > 0.0)
    }

    fn require_positive(&self) -> Result<()> {
        match self.probs.iter().position(|&v| v <= 0.0) {
            Some(config) => Err(Error::Positivity { config }),
            None => Ok(()),
        }
    }

    /// Natural parameters via `S^T = log(P(1_T)/P(0))` and Möbius inversion.
    pub fn to_natural(&self) -> Result<NaturalParams> {
        self.require_positive()?;
        let by_mask = natural_by_mask(&self.probs);
        let idx = SubsetIndex::shared(self.p)?;
        let coeffs = idx.subsets().iter().map(|s| by_mask[s.bits() as usize]).collect();
        Ok(NaturalParams { p: self.p, coeffs })
    }

    /// Joint law of `vars`, where variable `k` of the result is `vars[k]`.
    pub fn marginal_ordered(&self, vars: &[usize]) -> Result<GeneralParams> {
        if vars.is_empty() {
            return Err(Error::InvalidSubset("cannot marginalize onto the empty set".into()));
        }
        let mut seen = Subset::EMPTY;
        for &v in vars {
            if v >= self.p || seen.contains(v) {
                return Err(Error::InvalidSubset(format!("{vars:?} is not a set of distinct variables below {}", self.p)));
            }
            seen = seen.with(v);
        }
        let mut out = vec![0.0; 1 << vars.len()];
        for (c, &mass) in self.probs.iter().enumerate() {
            let mut local = 0usize;
            for (k, &v) in vars.iter().enumerate() {
                local |= (c >> v & 1) << k;
            }
            out[local] += mass;
        }
        Ok(GeneralParams { p: vars.len(), probs: out })
    }

    /// Marginal over `s`, variables renumbered in ascending order.
    pub fn marginalize(&self, s: Subset) -> Result<GeneralParams> {
        if !s.is_subset_of(Subset::full(self.p)) {
            return Err(Error::InvalidSubset(format!("subset exceeds {} variables", self.p)));
        }
        let vars: Vec<usize> = s.iter().collect();
        self.marginal_ordered(&vars)
    }

    /// Coefficients of `P(X_{order[pos]} = 1 | X_{order[..pos]})` in logistic
    /// form, aligned with the graded-lex feature map over the predecessors.
    pub fn conditional_coeffs(&self, order: &[usize], pos: usize) -> Result<ConditionalCoeffs> {
        check_permutation(order, self.p)?;
        if pos >= self.p {
            return Err(Error::InvalidInput(format!("position {pos} outside 0..{}", self.p)));
        }
        let marginal = self.marginal_ordered(&order[..=pos])?;
        marginal.require_positive()?;
        let by_mask = natural_by_mask(&marginal.probs);
        let prefix_idx = SubsetIndex::shared(pos)?;
        let target = Subset::singleton(pos);
        let coeffs = prefix_idx
            .subsets()
            .iter()
            .map(|s| by_mask[s.union(target).bits() as usize])
            .collect();
        Ok(ConditionalCoeffs { order: order.to_vec(), pos, coeffs })
    }

    /// `n` i.i.d. draws by inverse CDF over the table.
    pub fn sample(&self, n: usize, seed: u64) -> BinaryDataset {
        let mut cdf = Vec::with_capacity(self.probs.len());
        let mut acc = 0.0;
        for &v in &self.probs {
            acc += v;
            cdf.push(acc);
        }
        let last_nonzero = self.probs.iter().rposition(|&v| v > 0.0).unwrap_or(0);
        let mut r = rng::stream(seed, rng::TABLE_SAMPLE_STREAM);
        let masks: Vec<Subset> = (0..n)
            .map(|_| {
                let u: f64 = r.random::<f64>() * acc;
                let c = cdf.partition_point(|&x| x <= u).min(last_nonzero);
                Subset::from_bits(c as u64)
            })
            .collect();
        BinaryDataset::from_masks(self.p, &masks)
    }

    /// Empirical frequencies with additive smoothing:
    /// `(count(c) + s) / (n + s·2^p)`.
    pub fn empirical(data: &BinaryDataset, smoothing: f64) -> Result<GeneralParams> {
        check_table_p(data.p())?;
        if !(smoothing >= 0.0 && smoothing.is_finite()) {
            return Err(Error::InvalidInput(format!("smoothing {smoothing} must be a nonnegative number")));
        }
        let cells = 1usize << data.p();
        let denom = data.n() as f64 + smoothing * cells as f64;
        if denom <= 0.0 {
            return Err(Error::InvalidInput("empty dataset without smoothing".into()));
        }
        let mut probs = vec![smoothing; cells];
        for (s, count) in data.config_counts()? {
            probs[s.bits() as usize] += count as f64;
        }
        probs.iter_mut().for_each(|v| *v /= denom);
        GeneralParams::new(data.p(), probs)
    }

    /// Text form: a `# mvbdag table v1 p=<p>` header (any `#` line carrying
    /// `p=<p>` is accepted), then one probability per line in
    /// configuration-index order.
    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# mvbdag table v1 p={}", self.p)?;
        for v in &self.probs {
            writeln!(w, "{v}")?;
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(reader: R, origin: &Path) -> Result<Self> {
        let parse_err = |line: u64, msg: String| Error::Parse { path: origin.to_path_buf(), line, msg };
        let mut p = None;
        let mut probs = Vec::new();
        for (k, line) in reader.lines().enumerate() {
            let lineno = k as u64 + 1;
            let line = line.map_err(|e| Error::io(origin, e))?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            if t.starts_with('#') {
                if let Some(v) = crate::io::header_value(t, "p") {
                    p = Some(v.parse::<usize>().map_err(|e| parse_err(lineno, e.to_string()))?);
                }
                continue;
            }
            let v: f64 = t.parse().map_err(|_| parse_err(lineno, format!("'{t}' is not a number")))?;
            probs.push(v);
        }
        let p = p.ok_or_else(|| parse_err(1, "missing '# p=<nodes>' header".into()))?;
        GeneralParams::new(p, probs)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_from(std::io::BufReader::new(file), path)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        crate::io::write_atomic(path, |w| self.write_to(w))
    }
}

/// Natural coefficients by mask for a strictly positive table, with the
/// constant set to `log P(0) = -b(f)`.
fn natural_by_mask(probs: &[f64]) -> Vec<f64> {
    let log0 = probs[0].ln();
    let mut f: Vec<f64> = probs.iter().map(|v| v.ln() - log0).collect();
    transform::mobius(&mut f);
    f[0] = log0;
    f
}

/// Log-linear coefficients `f^S`, graded-lex order, with `f^∅ = -b(f)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NaturalParams {
    p: usize,
    coeffs: Vec<f64>,
}

impl NaturalParams {
    /// Takes `2^p` coefficients in graded-lex order. The constant entry is
    /// ignored on input and replaced by the normaliser `-b(f)`.
    pub fn new(p: usize, mut coeffs: Vec<f64>) -> Result<Self> {
        check_table_p(p)?;
        if coeffs.len() != 1 << p {
            return Err(Error::DimensionMismatch { expected: 1 << p, found: coeffs.len() });
        }
        if let Some(k) = coeffs.iter().skip(1).position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("coefficient at position {} is not finite", k + 1)));
        }
        coeffs[0] = 0.0;
        let mut out = NaturalParams { p, coeffs };
        out.coeffs[0] = -out.log_partition()?;
        Ok(out)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Coefficients in graded-lex order.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, s: Subset) -> Result<f64> {
        Ok(self.coeffs[SubsetIndex::shared(self.p)?.position_of(s)?])
    }

    /// `S^T = Σ_{∅≠S⊆T} f^S`, indexed by mask.
    fn s_values(&self) -> Result<Vec<f64>> {
        let idx = SubsetIndex::shared(self.p)?;
        let mut s = vec![0.0; self.coeffs.len()];
        for (k, &c) in self.coeffs.iter().enumerate().skip(1) {
            s[idx.subset_at(k).bits() as usize] = c;
        }
        transform::subset_sum(&mut s);
        Ok(s)
    }

    /// `b(f) = log Σ_T exp(S^T)`.
    pub fn log_partition(&self) -> Result<f64> {
        Ok(log_sum_exp(&self.s_values()?))
    }

    /// `P(1_T) = exp(S^T - b(f))`.
    pub fn to_general(&self) -> Result<GeneralParams> {
        if let Some(k) = self.coeffs.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("coefficient at position {k} is not finite")));
        }
        let s = self.s_values()?;
        let b = log_sum_exp(&s);
        let probs: Vec<f64> = s.iter().map(|v| (v - b).exp()).collect();
        GeneralParams::new(self.p, probs)
    }
}

/// Logistic coefficients of one node given its predecessors in `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalCoeffs {
    order: Vec<usize>,
    pos: usize,
    coeffs: Vec<f64>,
}

impl ConditionalCoeffs {
    /// `coeffs` must hold `2^pos` entries aligned with the graded-lex feature
    /// map over `order[..pos]`.
    pub fn new(order: Vec<usize>, pos: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_permutation(&order, order.len())?;
        if pos >= order.len() {
            return Err(Error::InvalidInput(format!("position {pos} outside 0..{}", order.len())));
        }
        check_table_p(pos)?;
        if coeffs.len() != 1 << pos {
            return Err(Error::DimensionMismatch { expected: 1 << pos, found: coeffs.len() });
        }
        Ok(ConditionalCoeffs { order, pos, coeffs })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// 0-based position of the node in the order.
    pub fn pos(&self) -> usize {
        self.pos
    }

    /// The node these coefficients predict.
    pub fn node(&self) -> usize {
        self.order[self.pos]
    }

    pub fn predecessors(&self) -> &[usize] {
        &self.order[..self.pos]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient on the monomial over `s`, a set of predecessor labels.
    pub fn coeff_for(&self, s: Subset) -> Option<f64> {
        let local = s.project(self.predecessors())?;
        Some(self.coeffs[SubsetIndex::shared(self.pos).ok()?.pos(local)])
    }

    /// `Σ_{S ∋ i} (f^{S,j})²` over monomials that involve predecessor `i`.
    pub fn interaction_strength(&self, predecessor: usize) -> f64 {
        let Some(k) = self.predecessors().iter().position(|&v| v == predecessor) else {
            return 0.0;
        };
        let idx = SubsetIndex::shared(self.pos).expect("length validated");
        idx.subsets()
            .iter()
            .zip(&self.coeffs)
            .filter(|(s, _)| s.contains(k))
            .map(|(_, c)| c * c)
            .sum()
    }

    /// Logit for a full configuration `x` (only predecessors are read).
    pub fn logit(&self, x: Subset) -> f64 {
        let idx = SubsetIndex::shared(self.pos).expect("length validated");
        let mut local = Subset::EMPTY;
        for (k, &v) in self.predecessors().iter().enumerate() {
            if x.contains(v) {
                local = local.with(k);
            }
        }
        idx.subsets()
            .iter()
            .zip(&self.coeffs)
            .filter(|(s, _)| s.is_subset_of(local))
            .map(|(_, c)| c)
            .sum()
    }

    pub fn prob_one(&self, x: Subset) -> f64 {
        sigmoid(self.logit(x))
    }

    /// Logits for every prefix configuration, indexed by local mask.
    fn prefix_logits(&self) -> Vec<f64> {
        let idx = SubsetIndex::shared(self.pos).expect("length validated");
        let mut a = vec![0.0; self.coeffs.len()];
        for (s, &c) in idx.subsets().iter().zip(&self.coeffs) {
            a[s.bits() as usize] = c;
        }
        transform::subset_sum(&mut a);
        a
    }
}

/// Joint law of the sequential Bernoulli model defined by one set of
/// conditional coefficients per position of `order`.
pub fn sem_induced_distribution(coeffs: &[ConditionalCoeffs], order: &[usize]) -> Result<GeneralParams> {
    let p = order.len();
    check_table_p(p)?;
    check_permutation(order, p)?;
    if coeffs.len() != p {
        return Err(Error::InvalidInput(format!("{} coefficient blocks for {p} nodes", coeffs.len())));
    }
    for (pos, c) in coeffs.iter().enumerate() {
        if c.pos != pos || c.order != order {
            return Err(Error::InvalidInput(format!("coefficient block {pos} does not match the order")));
        }
    }
    let logits: Vec<Vec<f64>> = coeffs.iter().map(ConditionalCoeffs::prefix_logits).collect();
    let mut probs = vec![0.0; 1 << p];
    for (c, slot) in probs.iter_mut().enumerate() {
        let mut prefix = 0usize;
        let mut mass = 1.0;
        for (pos, &node) in order.iter().enumerate() {
            let z = logits[pos][prefix];
            let one = c >> node & 1;
            mass *= if one == 1 { sigmoid(z) } else { sigmoid(-z) };
            prefix |= one << pos;
        }
        *slot = mass;
    }
    GeneralParams::new(p, probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn random_table(p: usize, seed: u64) -> GeneralParams {
        let mut r = rng::stream(seed, 99);
        let w: Vec<f64> = (0..1 << p).map(|_| 0.05 + r.random::<f64>()).collect();
        GeneralParams::from_weights(p, w).unwrap()
    }

    /// Conditional probability read directly from the table.
    fn table_conditional(gp: &GeneralParams, node: usize, given: &[usize], x: Subset) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for (c, &v) in gp.probs().iter().enumerate() {
            let cs = Subset::from_bits(c as u64);
            if given.iter().all(|&g| cs.contains(g) == x.contains(g)) {
                den += v;
                if cs.contains(node) {
                    num += v;
                }
            }
        }
        num / den
    }

    #[test]
    fn one_node_natural_values() {
        let sym = GeneralParams::new(1, vec![0.5, 0.5]).unwrap().to_natural().unwrap();
        assert!(sym.coeffs()[1].abs() < 1e-15);
        let skew = GeneralParams::new(1, vec![0.25, 0.75]).unwrap().to_natural().unwrap();
        assert!((skew.coeffs()[1] - 3f64.ln()).abs() < 1e-14);
        let back = NaturalParams::new(1, vec![0.0, 3f64.ln()]).unwrap().to_general().unwrap();
        assert!((back.probs()[0] - 0.25).abs() < 1e-15);
        assert!((back.probs()[1] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn independence_has_no_interaction() {
        let q = 0.3;
        let gp = GeneralParams::new(2, vec![(1.0 - q) * (1.0 - q), q * (1.0 - q), (1.0 - q) * q, q * q]).unwrap();
        let f = gp.to_natural().unwrap();
        assert!(f.coeff(Subset::from_indices([0, 1])).unwrap().abs() < 1e-14);
    }

    #[test]
    fn constant_is_negative_log_partition() {
        let gp = random_table(3, 1);
        let f = gp.to_natural().unwrap();
        assert!((f.coeffs()[0] + f.log_partition().unwrap()).abs() < 1e-10);
        assert!((f.coeffs()[0] - gp.probs()[0].ln()).abs() < 1e-12);
    }

    #[test]
    fn zero_coefficients_are_uniform() {
        let f = NaturalParams::new(3, vec![0.0; 8]).unwrap();
        for v in f.to_general().unwrap().probs() {
            assert!((v - 0.125).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_probability_is_positivity_error() {
        let gp = GeneralParams::new(2, vec![0.5, 0.0, 0.25, 0.25]).unwrap();
        assert!(!gp.strictly_positive());
        assert!(matches!(gp.to_natural(), Err(Error::Positivity { config: 1 })));
    }

    #[test]
    fn non_finite_coefficient_rejected() {
        assert!(matches!(NaturalParams::new(1, vec![0.0, f64::INFINITY]), Err(Error::Domain(_))));
    }

    #[test]
    fn marginal_identity_and_uniform() {
        let gp = random_table(3, 2);
        assert_eq!(gp.marginalize(Subset::full(3)).unwrap(), gp);
        let u = GeneralParams::uniform(2).unwrap();
        let m = u.marginalize(Subset::singleton(0)).unwrap();
        assert_eq!(m.probs(), &[0.5, 0.5]);
        assert!(matches!(gp.marginalize(Subset::EMPTY), Err(Error::InvalidSubset(_))));
    }

    #[test]
    fn marginal_matches_hand_sums() {
        let gp = random_table(3, 3);
        let m = gp.marginalize(Subset::from_indices([1, 2])).unwrap();
        let t = gp.probs();
        // local bit 0 is variable 1, local bit 1 is variable 2; sum over variable 0.
        let expected = [t[0] + t[1], t[2] + t[3], t[4] + t[5], t[6] + t[7]];
        for (a, b) in m.probs().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn first_position_is_marginal_log_odds() {
        let gp = random_table(3, 4);
        let order = [2, 0, 1];
        let c = gp.conditional_coeffs(&order, 0).unwrap();
        let m = gp.marginalize(Subset::singleton(2)).unwrap();
        assert_eq!(c.coeffs().len(), 1);
        assert!((c.coeffs()[0] - (m.probs()[1] / m.probs()[0]).ln()).abs() < 1e-12);
    }

    #[test]
    fn conditional_matches_table_ratio() {
        let gp = random_table(3, 5);
        let order = [1, 2, 0];
        let c = gp.conditional_coeffs(&order, 2).unwrap();
        assert_eq!(c.coeffs().len(), 4);
        for bits in 0..8u64 {
            let x = Subset::from_bits(bits);
            let want = table_conditional(&gp, 0, &[1, 2], x);
            assert!((c.prob_one(x) - want).abs() < 1e-10);
        }
    }

    #[test]
    fn independent_pair_has_zero_slope() {
        let gp = GeneralParams::new(2, vec![0.42, 0.18, 0.28, 0.12]).unwrap();
        let c = gp.conditional_coeffs(&[1, 0], 1).unwrap();
        assert!(c.coeffs()[1].abs() < 1e-12);
    }

    #[test]
    fn sem_simple_cases() {
        let c = ConditionalCoeffs::new(vec![0], 0, vec![0.0]).unwrap();
        let gp = sem_induced_distribution(&[c], &[0]).unwrap();
        assert_eq!(gp.probs(), &[0.5, 0.5]);
        let order = vec![1, 0, 2];
        let blocks: Vec<_> = (0..3)
            .map(|pos| ConditionalCoeffs::new(order.clone(), pos, vec![0.0; 1 << pos]).unwrap())
            .collect();
        let gp = sem_induced_distribution(&blocks, &order).unwrap();
        assert!(gp.probs().iter().all(|v| (v - 0.125).abs() < 1e-15));
        assert!(sem_induced_distribution(&blocks[..2], &order).is_err());
    }

    #[test]
    fn both_orders_induce_same_law() {
        let gp = random_table(2, 6);
        for order in [[0usize, 1], [1, 0]] {
            let blocks: Vec<_> = (0..2).map(|pos| gp.conditional_coeffs(&order, pos).unwrap()).collect();
            let back = sem_induced_distribution(&blocks, &order).unwrap();
            for (a, b) in back.probs().iter().zip(gp.probs()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sampling_degenerate_and_deterministic() {
        let x = Subset::from_indices([0, 2]);
        let gp = GeneralParams::point_mass(3, x).unwrap();
        let d = gp.sample(50, 9);
        assert!((0..50).all(|i| d.row_subset(i) == x));
        let gp = random_table(3, 7);
        assert_eq!(gp.sample(100, 4), gp.sample(100, 4));
        assert_eq!(gp.sample(0, 4).n(), 0);
    }

    #[test]
    fn uniform_sampling_frequencies() {
        let p = 3;
        let n = 1_000_000;
        let d = GeneralParams::uniform(p).unwrap().sample(n, 11);
        let q = 1.0 / 8.0;
        let sd = (n as f64 * q * (1.0 - q)).sqrt();
        for (_, count) in d.config_counts().unwrap() {
            assert!((count as f64 - n as f64 * q).abs() < 5.0 * sd);
        }
    }

    #[test]
    fn empirical_tables() {
        let x = [1u8, 0, 1];
        let one = BinaryDataset::from_rows(3, &[x]).unwrap();
        let gp = GeneralParams::empirical(&one, 0.0).unwrap();
        assert_eq!(gp.prob(Subset::from_indices([0, 2])), 1.0);
        let two = BinaryDataset::from_rows(2, &[[0u8, 1], [1, 1]]).unwrap();
        let gp = GeneralParams::empirical(&two, 0.0).unwrap();
        assert_eq!(gp.probs(), &[0.0, 0.0, 0.5, 0.5]);
        let gp = GeneralParams::empirical(&two, 1.0).unwrap();
        assert!((gp.prob(Subset::EMPTY) - 1.0 / 6.0).abs() < 1e-15);
        assert!(gp.strictly_positive());
    }

    #[test]
    fn table_text_round_trip() {
        let gp = random_table(2, 8);
        let mut buf = Vec::new();
        gp.write_to(&mut buf).unwrap();
        let back = GeneralParams::read_from(buf.as_slice(), Path::new("mem")).unwrap();
        assert_eq!(back.p(), 2);
        for (a, b) in back.probs().iter().zip(gp.probs()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    proptest! {
        #[test]
        fn natural_round_trip(p in 1usize..=4, seed in any::<u64>()) {
            let gp = random_table(p, seed);
            let back = gp.to_natural().unwrap().to_general().unwrap();
            let err = back.probs().iter().zip(gp.probs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            prop_assert!(err <= 1e-10);
            prop_assert!((back.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn marginals_stay_valid(seed in any::<u64>(), bits in 1u64..16) {
            let gp = random_table(4, seed);
            let m = gp.marginalize(Subset::from_bits(bits)).unwrap();
            prop_assert!(m.strictly_positive());
            prop_assert!((m.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
