// SPDX-License-Identifier: Apache-2.0
//! Experiment grid: cells, replication seeds and output layout.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use mvbdag::{generate, BinaryDataset, Family, GraphSpec, GroundTruth};

use crate::GridArgs;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cell {
    pub family: Family,
    pub k: usize,
    pub p: usize,
}

impl Cell {
    pub fn dir_name(&self) -> String {
        format!("{}_k{}_p{}", self.family, self.k, self.p)
    }

    fn tag(&self) -> u64 {
        let f = match self.family {
            Family::Er => 0,
            Family::Sf => 1,
        };
        f | (self.k as u64) << 8 | (self.p as u64) << 32
    }
}

/// One replication of one cell.
#[derive(Clone, Copy, Debug)]
pub struct Job {
    pub cell: Cell,
    pub rep: usize,
    pub rep_seed: u64,
}

impl Job {
    /// Seeds of the graph draw and of the weight and sample draws. They
    /// depend on the cell and the replication seed alone, so a replication
    /// gives the same data wherever it sits in the grid.
    pub fn seeds(&self) -> (u64, u64) {
        let base = splitmix(self.rep_seed ^ splitmix(self.cell.tag()));
        (splitmix(base), splitmix(base ^ 0x5bd1_e995))
    }

    pub fn dir(&self, root: &Path) -> PathBuf {
        root.join(self.cell.dir_name()).join(format!("rep{}", self.rep))
    }

    pub fn generate(&self, n: usize, kind: mvbdag::InteractionKind) -> Result<(BinaryDataset, GroundTruth)> {
        let (graph_seed, data_seed) = self.seeds();
        let spec = GraphSpec::new(self.cell.p, self.cell.k, self.cell.family, graph_seed)?;
        generate(&spec, n, kind, data_seed).with_context(|| format!("cell {}", self.cell.dir_name()))
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl GridArgs {
    pub fn cells(&self) -> Result<Vec<Cell>> {
        if self.p.is_empty() || self.k.is_empty() || self.family.is_empty() {
            bail!("the p, k and family grids must be nonempty");
        }
        let mut cells = Vec::new();
        for &family in &self.family {
            for &k in &self.k {
                for &p in &self.p {
                    cells.push(Cell { family, k, p });
                }
            }
        }
        Ok(cells)
    }

    pub fn rep_seeds(&self) -> Result<Vec<u64>> {
        let seeds: Vec<u64> = match &self.rep_seeds {
            Some(s) => s.clone(),
            None => (0..self.reps as u64).map(|r| self.seed.wrapping_add(r)).collect(),
        };
        if seeds.is_empty() {
            bail!("at least one replication is required");
        }
        Ok(seeds)
    }

    pub fn jobs(&self) -> Result<Vec<Job>> {
        let seeds = self.rep_seeds()?;
        Ok(self
            .cells()?
            .into_iter()
            .flat_map(|cell| seeds.iter().enumerate().map(move |(rep, &rep_seed)| Job { cell, rep, rep_seed }))
            .collect())
    }

    pub fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new().num_threads(self.jobs).build().context("building the worker pool")
    }
}
