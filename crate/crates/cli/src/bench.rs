// SPDX-License-Identifier: Apache-2.0
//! Grid benchmark: per-replication rows and per-cell summaries.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::Result;
use mvbdag::io::write_string;
use rayon::prelude::*;

use crate::commands::{load_config, metrics, Metrics};
use crate::grid::{Cell, Job};
use crate::method::{self, Method};
use crate::BenchArgs;

pub const DETAIL_HEADER: &str = "# mvbdag bench detail v1";
pub const SUMMARY_HEADER: &str = "# mvbdag bench summary v1";

struct Outcome {
    job: Job,
    method: Method,
    result: Result<Metrics, String>,
}

fn one_line(e: &anyhow::Error) -> String {
    format!("{e:#}").replace([',', '\n'], ";")
}

/// Runs every replication, then writes `detail.csv` and one
/// `summary_<family>_k<k>.csv` per family and density. Returns whether every
/// replication succeeded.
pub fn run(args: &BenchArgs) -> Result<bool> {
    let g = &args.grid;
    let cfg = load_config(args.config.as_deref())?;
    if args.method.is_empty() {
        anyhow::bail!("at least one method is required");
    }
    let jobs = g.jobs()?;
    let outcomes: Vec<Outcome> = g.pool()?.install(|| {
        jobs.par_iter()
            .flat_map_iter(|&job| {
                let generated = job.generate(g.n, g.tau);
                let results: Vec<Outcome> = args
                    .method
                    .iter()
                    .map(|&m| {
                        let result = generated
                            .as_ref()
                            .map_err(one_line)
                            .and_then(|(data, truth)| {
                                let est = method::learn(m, data, &cfg, &args.enumerate).map_err(|e| one_line(&e))?;
                                est.dag
                                    .write_edge_list(&job.dir(&g.out).join(format!("{m}_graph.txt")))
                                    .map_err(|e| one_line(&e.into()))?;
                                metrics(&est.dag, &truth.graph).map_err(|e| one_line(&e))
                            });
                        if let Err(e) = &result {
                            eprintln!("{} rep {} {m}: {e}", job.cell.dir_name(), job.rep);
                        }
                        Outcome { job, method: m, result }
                    })
                    .collect();
                if let Ok((_, truth)) = &generated {
                    if let Err(e) = truth.graph.write_edge_list(&job.dir(&g.out).join("truth_graph.txt")) {
                        eprintln!("{e}");
                    }
                }
                results
            })
            .collect()
    });

    let mut detail = format!(
        "{DETAIL_HEADER} n={} tau={}\nfamily,k,p,rep,rep_seed,method,status,shd,estimated_edges,true_edges,error\n",
        g.n,
        g.tau.name()
    );
    let mut cells: BTreeMap<(Cell, Method), (Vec<f64>, usize)> = BTreeMap::new();
    for o in &outcomes {
        let c = o.job.cell;
        let _ = write!(detail, "{},{},{},{},{},{},", c.family, c.k, c.p, o.job.rep, o.job.rep_seed, o.method);
        let entry = cells.entry((c, o.method)).or_default();
        match &o.result {
            Ok(m) => {
                let _ = writeln!(detail, "ok,{},{},{},", m.shd, m.estimated_edges, m.true_edges);
                entry.0.push(m.shd as f64);
            }
            Err(e) => {
                let _ = writeln!(detail, "failed,,,,{e}");
                entry.1 += 1;
            }
        }
    }
    write_string(&g.out.join("detail.csv"), &detail)?;

    let mut files: BTreeMap<String, String> = BTreeMap::new();
    for ((c, m), (shds, failures)) in &cells {
        let text = files.entry(format!("summary_{}_k{}.csv", c.family, c.k)).or_insert_with(|| {
            format!("{SUMMARY_HEADER} n={} tau={}\nfamily,k,p,method,reps,failures,mean_shd,se\n", g.n, g.tau.name())
        });
        let (mean, se) = mean_se(shds);
        let _ = writeln!(text, "{},{},{},{m},{},{failures},{},{}", c.family, c.k, c.p, shds.len(), fmt_opt(mean), fmt_opt(se));
    }
    for (name, text) in &files {
        write_string(&g.out.join(name), text)?;
    }
    Ok(cells.values().all(|(_, failures)| *failures == 0))
}

/// Mean and standard error `sd / sqrt(m)`; the values are sorted first so
/// the result does not depend on replication order.
fn mean_se(values: &[f64]) -> (Option<f64>, Option<f64>) {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() as f64;
    if v.is_empty() {
        return (None, None);
    }
    let mean = v.iter().sum::<f64>() / m;
    if v.len() < 2 {
        return (Some(mean), None);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (Some(mean), Some((var / m).sqrt()))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_standard_error() {
        let (mean, se) = mean_se(&[1.0, 3.0]);
        assert_eq!(mean, Some(2.0));
        assert!((se.unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(mean_se(&[4.0]), (Some(4.0), None));
        assert_eq!(mean_se(&[]), (None, None));
        assert_eq!(mean_se(&[3.0, 1.0, 2.0]), mean_se(&[1.0, 2.0, 3.0]));
    }
}
