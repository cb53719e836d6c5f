// SPDX-License-Identifier: Apache-2.0
//! Learning methods behind one interface.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Result};
use mvbdag::exact::{write_class, DEFAULT_EDGE_TOL};
use mvbdag::learner::{write_trace, TraceRow};
use mvbdag::{
    binotears, enumerate_equivalence_class, minimal_equivalence_class, solve, BinaryDataset, Dag, GeneralParams,
    InteractionKind, InteractionMap, RecoveredModel, ScoreInput, SolverConfig,
};

use crate::EnumerateOpts;

/// Edge tolerance for enumeration over a smoothed empirical table.
pub const DATA_EDGE_TOL: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Binotears,
    SolveFull,
    SolveFirstOrder,
    Enumerate,
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "binotears" => Ok(Method::Binotears),
            "solve-full" => Ok(Method::SolveFull),
            "solve-first-order" => Ok(Method::SolveFirstOrder),
            "enumerate" => Ok(Method::Enumerate),
            _ => Err(format!("unknown method '{s}' (binotears, solve-full, solve-first-order, enumerate)")),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Binotears => "binotears",
            Method::SolveFull => "solve-full",
            Method::SolveFirstOrder => "solve-first-order",
            Method::Enumerate => "enumerate",
        })
    }
}

/// What a method leaves behind besides the graph.
pub enum Extra {
    Trace(Vec<TraceRow>),
    Class(Vec<RecoveredModel>),
}

pub struct Estimate {
    pub dag: Dag,
    pub extra: Extra,
}

impl Estimate {
    /// `graph.txt` plus `trace.csv` or the enumeration manifest under `class/`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        self.dag.write_edge_list(&dir.join("graph.txt"))?;
        match &self.extra {
            Extra::Trace(rows) => write_trace(rows, &dir.join("trace.csv"))?,
            Extra::Class(models) => write_class(models, &dir.join("class"))?,
        }
        Ok(())
    }
}

pub fn learn(method: Method, data: &BinaryDataset, cfg: &SolverConfig, opts: &EnumerateOpts) -> Result<Estimate> {
    let p = data.p();
    let fit = |kind| -> Result<Estimate> {
        let map = InteractionMap::new(kind, p)?;
        let r = solve(ScoreInput::Data(data), &map, cfg)?;
        Ok(Estimate { dag: r.dag, extra: Extra::Trace(r.trace) })
    };
    match method {
        Method::Binotears => {
            let r = binotears(data, cfg)?;
            Ok(Estimate { dag: r.dag, extra: Extra::Trace(r.stage1.trace) })
        }
        Method::SolveFull => fit(InteractionKind::Full),
        Method::SolveFirstOrder => fit(InteractionKind::FirstOnly),
        Method::Enumerate => {
            let gp = GeneralParams::empirical(data, opts.smoothing)?;
            enumerate(&gp, opts.edge_tol.unwrap_or(DATA_EDGE_TOL))
        }
    }
}

/// Every order's model; the estimate is the first member with fewest edges.
pub fn enumerate(gp: &GeneralParams, tol: f64) -> Result<Estimate> {
    if !(tol >= 0.0 && tol.is_finite()) {
        bail!("edge tolerance {tol} must be a nonnegative number");
    }
    let models = enumerate_equivalence_class(gp, tol)?;
    let dag = minimal_equivalence_class(&models)?.swap_remove(0).graph;
    Ok(Estimate { dag, extra: Extra::Class(models) })
}

pub fn table_edge_tol(opts: &EnumerateOpts) -> f64 {
    opts.edge_tol.unwrap_or(DEFAULT_EDGE_TOL)
}
