// SPDX-License-Identifier: Apache-2.0
//! Interaction feature maps `x ↦ [B^S(x)]_S` with `B^S(x) = Π_{j∈S} x_j`.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::dataset::BinaryDataset;
use crate::error::{Error, Result};
use crate::subset::{Subset, SubsetIndex, MAX_TABLE_NODES};

/// Which interaction blocks a feature map keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InteractionKind {
    /// Every monomial.
    Full,
    FirstSecond,
    FirstPth,
    FirstSecondPth,
    SecondOnly,
    PthOnly,
    /// Constant plus the `p` linear terms, laid out compactly.
    FirstOnly,
}

impl InteractionKind {
    pub const ALL: [InteractionKind; 7] = [
        InteractionKind::Full,
        InteractionKind::FirstSecond,
        InteractionKind::FirstPth,
        InteractionKind::FirstSecondPth,
        InteractionKind::SecondOnly,
        InteractionKind::PthOnly,
        InteractionKind::FirstOnly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InteractionKind::Full => "full",
            InteractionKind::FirstSecond => "first+second",
            InteractionKind::FirstPth => "first+pth",
            InteractionKind::FirstSecondPth => "first+second+pth",
            InteractionKind::SecondOnly => "second",
            InteractionKind::PthOnly => "pth",
            InteractionKind::FirstOnly => "first",
        }
    }

    /// Whether the monomial on `s` is kept when the map acts on `m` variables.
    /// The constant is always kept.
    pub fn is_active(self, s: Subset, m: usize) -> bool {
        let r = s.len();
        if r == 0 {
            return true;
        }
        let top = r == m;
        match self {
            InteractionKind::Full => true,
            InteractionKind::FirstSecond => r <= 2,
            InteractionKind::FirstPth => r == 1 || top,
            InteractionKind::FirstSecondPth => r <= 2 || top,
            InteractionKind::SecondOnly => r == 2,
            InteractionKind::PthOnly => top,
            InteractionKind::FirstOnly => r == 1,
        }
    }

    /// Active subsets of `{0, .., m-1}` in graded-lex order.
    pub fn active_subsets(self, m: usize) -> Vec<Subset> {
        let mut out = Vec::new();
        for r in 0..=m {
            let keep = match self {
                InteractionKind::Full => true,
                _ => self.is_active(Subset::full(r), m),
            };
            if keep {
                out.extend((0..m).combinations(r).map(Subset::from_indices));
            }
        }
        out
    }
}

impl fmt::Display for InteractionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InteractionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace(['_', ' '], "");
        let kind = match norm.as_str() {
            "full" => InteractionKind::Full,
            "first+second" | "1st+2nd" => InteractionKind::FirstSecond,
            "first+pth" | "1st+pth" => InteractionKind::FirstPth,
            "first+second+pth" | "1st+2nd+pth" => InteractionKind::FirstSecondPth,
            "second" | "second-only" | "2nd" => InteractionKind::SecondOnly,
            "pth" | "pth-only" => InteractionKind::PthOnly,
            "first" | "first-only" | "1st" | "linear" => InteractionKind::FirstOnly,
            _ => return Err(Error::InvalidInput(format!("unknown interaction kind '{s}'"))),
        };
        Ok(kind)
    }
}

/// A feature map of a given kind over `p` variables.
///
/// `FirstOnly` yields `[1, x_1, .., x_p]`. Every other kind uses the full
/// `2^p` graded-lex layout with inactive blocks set to zero, and is limited
/// to `p ≤ 16`; [`InteractionMap::compact`] gives the active features alone
/// for any `p ≤ 64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InteractionMap {
    kind: InteractionKind,
    p: usize,
}

impl InteractionMap {
    pub fn new(kind: InteractionKind, p: usize) -> Result<Self> {
        if p > 64 {
            return Err(Error::Capacity { what: "feature map", max: 64, got: p });
        }
        Ok(InteractionMap { kind, p })
    }

    pub fn kind(&self) -> InteractionKind {
        self.kind
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Length of the dense layout produced by [`InteractionMap::feature_map`].
    pub fn feature_len(&self) -> usize {
        match self.kind {
            InteractionKind::FirstOnly => self.p + 1,
            _ => 1 << self.p,
        }
    }

    /// Subsets labelling each entry of the dense layout.
    pub fn layout(&self) -> Result<Vec<Subset>> {
        match self.kind {
            InteractionKind::FirstOnly => Ok(InteractionKind::FirstOnly.active_subsets(self.p)),
            _ => Ok(SubsetIndex::shared(self.dense_p()?)?.subsets().to_vec()),
        }
    }

    pub fn is_active(&self, s: Subset) -> bool {
        self.kind.is_active(s, self.p)
    }

    /// Active subsets only, graded-lex.
    pub fn compact(&self) -> Vec<Subset> {
        self.kind.active_subsets(self.p)
    }

    fn dense_p(&self) -> Result<usize> {
        if self.p > MAX_TABLE_NODES {
            Err(Error::Capacity { what: "dense feature map", max: MAX_TABLE_NODES, got: self.p })
        } else {
            Ok(self.p)
        }
    }

    fn row_subset(&self, x: &[u8]) -> Result<Subset> {
        if x.len() != self.p {
            return Err(Error::DimensionMismatch { expected: self.p, found: x.len() });
        }
        let mut s = Subset::EMPTY;
        for (j, &v) in x.iter().enumerate() {
            match v {
                0 => {}
                1 => s = s.with(j),
                other => {
                    return Err(Error::Domain(format!("entry {j} is {other}, expected 0 or 1")))
                }
            }
        }
        Ok(s)
    }

    /// Dense feature vector of one binary observation.
    pub fn feature_map(&self, x: &[u8]) -> Result<Vec<f64>> {
        let ones = self.row_subset(x)?;
        let layout = self.layout()?;
        Ok(layout
            .iter()
            .map(|&s| if self.is_active(s) && s.is_subset_of(ones) { 1.0 } else { 0.0 })
            .collect())
    }

    /// Active-feature vector of one binary observation, aligned with
    /// [`InteractionMap::compact`].
    pub fn compact_features(&self, x: &[u8]) -> Result<Vec<f64>> {
        let ones = self.row_subset(x)?;
        Ok(self
            .compact()
            .into_iter()
            .map(|s| if s.is_subset_of(ones) { 1.0 } else { 0.0 })
            .collect())
    }

    /// Row-wise dense features, `n × feature_len` row-major.
    pub fn feature_matrix(&self, data: &BinaryDataset) -> Result<Vec<f64>> {
        if data.p() != self.p {
            return Err(Error::DimensionMismatch { expected: self.p, found: data.p() });
        }
        let mut out = Vec::with_capacity(data.n() * self.feature_len());
        for row in data.rows() {
            out.extend(self.feature_map(row)?);
        }
        Ok(out)
    }
}
