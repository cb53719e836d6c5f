// SPDX-License-Identifier: Apache-2.0
//! Variable subsets and the graded-lexicographic index over them.
//!
//! Variables are 0-based in code. A configuration `x ∈ {0,1}^p` and the set
//! of its ones share the same bit pattern: variable `j` lives in bit `j`, so
//! the configuration index of `x` is `Σ_j x_j 2^j`.

use std::cmp::Ordering;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest node count for which a dense `2^p` table is materialised.
pub const MAX_TABLE_NODES: usize = 16;

/// A subset of `{0, .., 63}` stored as a bit mask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < 64);
        Subset(1u64 << i)
    }

    /// Builds a subset from 0-based element indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(items: I) -> Self {
        items.into_iter().fold(Subset::EMPTY, |s, i| s.with(i))
    }

    /// The full set `{0, .., p-1}`.
    pub fn full(p: usize) -> Self {
        if p >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << p) - 1)
        }
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn with(self, i: usize) -> Self {
        Subset(self.0 | 1u64 << i)
    }

    pub fn without(self, i: usize) -> Self {
        Subset(self.0 & !(1u64 << i))
    }

    pub fn union(self, other: Subset) -> Self {
        Subset(self.0 | other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    /// Elements in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// Re-expresses a subset of `vars` (given as positions into `vars`) in
    /// terms of the original variable labels.
    pub fn lift(self, vars: &[usize]) -> Subset {
        Subset::from_indices(self.iter().map(|k| vars[k]))
    }

    /// Expresses `self`, a subset of the labels in `vars`, as positions
    /// into `vars`. Returns `None` if an element is not listed.
    pub fn project(self, vars: &[usize]) -> Option<Subset> {
        let mut out = Subset::EMPTY;
        for e in self.iter() {
            out = out.with(vars.iter().position(|&v| v == e)?);
        }
        Some(out)
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Subset::from_indices(iter)
    }
}

/// Graded-lexicographic comparison: by cardinality, then by the first
/// differing element of the ascending element lists (smaller element first).
pub fn graded_lex_cmp(a: Subset, b: Subset) -> Ordering {
    match a.len().cmp(&b.len()) {
        Ordering::Equal if a == b => Ordering::Equal,
        Ordering::Equal => {
            let first_diff = (a.0 ^ b.0).trailing_zeros();
            if a.0 >> first_diff & 1 == 1 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        ord => ord,
    }
}

/// Bijection between subsets of `{0, .., p-1}` and positions `0..2^p` in
/// graded-lexicographic order.
#[derive(Debug, Clone)]
pub struct SubsetIndex {
    p: usize,
    order: Vec<Subset>,
    position: Vec<u32>,
}

impl SubsetIndex {
    pub fn new(p: usize) -> Result<Self> {
        if p > MAX_TABLE_NODES {
            return Err(Error::Capacity { what: "subset index", max: MAX_TABLE_NODES, got: p });
        }
        let mut order: Vec<Subset> = (0..1u64 << p).map(Subset).collect();
        order.sort_by(|&a, &b| graded_lex_cmp(a, b));
        let mut position = vec![0u32; order.len()];
        for (k, s) in order.iter().enumerate() {
            position[s.0 as usize] = k as u32;
        }
        Ok(SubsetIndex { p, order, position })
    }

    /// Process-wide cached index for `p`.
    pub fn shared(p: usize) -> Result<&'static SubsetIndex> {
        static CACHE: [OnceLock<SubsetIndex>; MAX_TABLE_NODES + 1] =
            [const { OnceLock::new() }; MAX_TABLE_NODES + 1];
        if p > MAX_TABLE_NODES {
            return Err(Error::Capacity { what: "subset index", max: MAX_TABLE_NODES, got: p });
        }
        Ok(CACHE[p].get_or_init(|| SubsetIndex::new(p).expect("p checked above")))
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn position_of(&self, s: Subset) -> Result<usize> {
        if !s.is_subset_of(Subset::full(self.p)) {
            return Err(Error::InvalidSubset(format!(
                "{:?} is not a subset of {} variables",
                s.iter().collect::<Vec<_>>(),
                self.p
            )));
        }
        Ok(self.position[s.0 as usize] as usize)
    }

    /// Position of a subset already known to lie in range.
    pub(crate) fn pos(&self, s: Subset) -> usize {
        self.position[s.0 as usize] as usize
    }

    pub fn subset_at(&self, k: usize) -> Subset {
        self.order[k]
    }

    pub fn subsets(&self) -> &[Subset] {
        &self.order
    }
}
