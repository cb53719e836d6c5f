// SPDX-License-Identifier: Apache-2.0
//! `simulate`, `learn`, `enumerate` and `evaluate`.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use mvbdag::io::write_string;
use mvbdag::{shd_cpdag, BinaryDataset, Cpdag, Dag, GeneralParams, SolverConfig};
use rayon::prelude::*;

use crate::method::{self, Method};
use crate::{EnumerateArgs, EvaluateArgs, InputArgs, LearnArgs, SimulateArgs};

pub const SIMULATE_HEADER: &str = "# mvbdag simulate manifest v1";
pub const METRICS_HEADER: &str = "# mvbdag metrics v1";

pub fn load_config(path: Option<&Path>) -> Result<SolverConfig> {
    Ok(match path {
        Some(p) => SolverConfig::read(p)?,
        None => SolverConfig::default(),
    })
}

/// Writes `data.csv`, `graph.txt`, `weights.csv` and, for small `p`,
/// `params.csv` per replication, plus `manifest.csv` at the root.
pub fn simulate(args: &SimulateArgs) -> Result<()> {
    let g = &args.grid;
    let jobs = g.jobs()?;
    let rows = g.pool()?.install(|| {
        jobs.par_iter()
            .map(|job| -> Result<String> {
                let (data, truth) = job.generate(g.n, g.tau)?;
                let dir = job.dir(&g.out);
                data.write_csv(&dir.join("data.csv"))?;
                truth.write(&dir, "")?;
                let (gs, ds) = job.seeds();
                let c = job.cell;
                Ok(format!("{},{},{},{},{},{gs},{ds},{}", c.family, c.k, c.p, job.rep, job.rep_seed, dir.display()))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut manifest = format!("{SIMULATE_HEADER} n={} tau={}\nfamily,k,p,rep,rep_seed,graph_seed,data_seed,dir\n", g.n, g.tau.name());
    for r in rows {
        let _ = writeln!(manifest, "{r}");
    }
    write_string(&g.out.join("manifest.csv"), &manifest)?;
    Ok(())
}

enum Input {
    Data(BinaryDataset),
    Table(GeneralParams),
}

fn read_input(input: &InputArgs) -> Result<Input> {
    match (&input.data, &input.table) {
        (Some(d), _) => Ok(Input::Data(BinaryDataset::read_csv(d)?)),
        (None, Some(t)) => Ok(Input::Table(GeneralParams::read(t)?)),
        (None, None) => unreachable!("clap requires one input"),
    }
}

pub fn learn(args: &LearnArgs) -> Result<()> {
    let cfg = load_config(args.config.as_deref())?;
    let est = match read_input(&args.input)? {
        Input::Data(d) => method::learn(args.method, &d, &cfg, &args.enumerate)?,
        Input::Table(gp) if args.method == Method::Enumerate => {
            method::enumerate(&gp, method::table_edge_tol(&args.enumerate))?
        }
        Input::Table(_) => anyhow::bail!("method {} needs --data; only enumerate reads a table", args.method),
    };
    est.write(&args.out).with_context(|| format!("writing results to {}", args.out.display()))
}

pub fn enumerate(args: &EnumerateArgs) -> Result<()> {
    let est = match read_input(&args.input)? {
        Input::Data(d) => method::learn(Method::Enumerate, &d, &SolverConfig::default(), &args.enumerate)?,
        Input::Table(gp) => method::enumerate(&gp, method::table_edge_tol(&args.enumerate))?,
    };
    est.write(&args.out)
}

pub struct Metrics {
    pub shd: usize,
    pub estimated_edges: usize,
    pub true_edges: usize,
}

pub fn metrics(estimate: &Dag, truth: &Dag) -> Result<Metrics> {
    let shd = shd_cpdag(&Cpdag::from_dag(estimate), &Cpdag::from_dag(truth))?;
    Ok(Metrics { shd, estimated_edges: estimate.edge_count(), true_edges: truth.edge_count() })
}

pub fn evaluate(args: &EvaluateArgs) -> Result<()> {
    let truth = Dag::read_edge_list(&args.truth, None)?;
    let estimate = Dag::read_edge_list(&args.estimate, Some(truth.p()))?;
    let m = metrics(&estimate, &truth)?;
    let text = format!(
        "{METRICS_HEADER}\nshd,estimated_edges,true_edges\n{},{},{}\n",
        m.shd, m.estimated_edges, m.true_edges
    );
    match &args.out {
        Some(path) => write_string(path, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}
