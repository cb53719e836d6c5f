// SPDX-License-Identifier: Apache-2.0
//! Solver settings and the per-solve trace file.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use super::TraceRow;
use crate::error::{Error, Result};
use crate::graph::Acyclicity;
use crate::io::{read_string, write_string};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AcyclicityKind {
    Expm,
    Logdet,
}

/// Settings for [`solve`](super::solve) and [`binotears`](super::binotears).
///
/// The text form is `key = value` lines (TOML), every key optional:
///
/// ```text
/// lambda0 = 0.05
/// delta0 = 0.2
/// gamma = 0.5
/// mu_schedule = [1.0, 10.0, 100.0, 1000.0]
/// ```
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub lambda0: f64,
    pub delta0: f64,
    /// Shrink factor applied to `lambda` and `delta` after each round.
    pub gamma: f64,
    pub max_rounds: usize,
    /// A round must lower the unpenalized score by more than this to be kept.
    pub score_tol: f64,
    /// Threshold on `W(H)` for the final graph.
    pub edge_threshold: f64,
    /// Second-stage pruning threshold on the aggregated coefficient weight.
    pub prune_threshold: f64,
    /// Ridge of the second-stage logistic fits, on the summed (not averaged)
    /// log-likelihood; intercepts are not penalized.
    pub ridge: f64,
    /// Multipliers of the acyclicity penalty, applied in order.
    pub mu_schedule: Vec<f64>,
    /// After the schedule, `mu` keeps growing tenfold while `h(W) > h_tol`,
    /// up to `mu_max`.
    pub h_tol: f64,
    pub mu_max: f64,
    pub acyclicity: AcyclicityKind,
    /// Parameter `s` of the log-determinant characterization.
    pub logdet_s: f64,
    pub max_iter: usize,
    pub grad_tol: f64,
    pub ftol: f64,
    pub memory: usize,
    /// Half-width of the uniform noise added to the zero start.
    pub init_scale: f64,
    /// Refine the continuous solution by a local search over variable orders.
    pub order_search: bool,
    /// Random restarts of the order search from its best order.
    pub order_kicks: usize,
    /// Refine the second-stage order of the two-stage learner by a local
    /// search on the BIC of its pruned fits (also `order_kicks` restarts).
    pub refine_order: bool,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            lambda0: 0.05,
            delta0: 0.2,
            gamma: 0.5,
            max_rounds: 5,
            score_tol: 0.0,
            edge_threshold: 0.3,
            prune_threshold: 1.0,
            ridge: 1.0,
            mu_schedule: vec![1.0, 10.0, 100.0, 1000.0],
            h_tol: 1e-12,
            mu_max: 1e22,
            acyclicity: AcyclicityKind::Expm,
            logdet_s: 1.0,
            max_iter: 5000,
            grad_tol: 1e-7,
            ftol: 1e-12,
            memory: 10,
            init_scale: 1e-3,
            order_search: true,
            order_kicks: 5,
            refine_order: true,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.lambda0 > 0.0 && self.lambda0.is_finite()) {
            return bad(format!("lambda0 = {} must be positive", self.lambda0));
        }
        if !(self.delta0 > 0.0 && self.delta0.is_finite()) {
            return bad(format!("delta0 = {} must be positive", self.delta0));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return bad(format!("gamma = {} must lie in (0, 1)", self.gamma));
        }
        if self.max_rounds == 0 {
            return bad("max_rounds must be at least 1".into());
        }
        for (name, v) in [
            ("edge_threshold", self.edge_threshold),
            ("prune_threshold", self.prune_threshold),
            ("ridge", self.ridge),
            ("score_tol", self.score_tol),
            ("grad_tol", self.grad_tol),
            ("ftol", self.ftol),
            ("init_scale", self.init_scale),
            ("h_tol", self.h_tol),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(format!("{name} = {v} must be a nonnegative number"));
            }
        }
        if self.mu_schedule.is_empty() || self.mu_schedule.iter().any(|&m| !(m > 0.0 && m.is_finite())) {
            return bad("mu_schedule must be a nonempty list of positive numbers".into());
        }
        if !(self.mu_max.is_finite() && self.mu_max >= *self.mu_schedule.last().unwrap()) {
            return bad(format!("mu_max = {} must be finite and at least the last scheduled mu", self.mu_max));
        }
        if self.acyclicity == AcyclicityKind::Logdet && !(self.logdet_s > 0.0) {
            return bad(format!("logdet_s = {} must be positive", self.logdet_s));
        }
        if self.max_iter == 0 || self.memory == 0 {
            return bad("max_iter and memory must be positive".into());
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: SolverConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&read_string(path)?).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub(crate) fn acyclicity_fn(&self) -> Acyclicity {
        match self.acyclicity {
            AcyclicityKind::Expm => Acyclicity::Expm,
            AcyclicityKind::Logdet => Acyclicity::LogDet { s: self.logdet_s },
        }
    }
}

/// Header line of trace files.
pub const TRACE_HEADER: &str = "# mvbdag trace v1";

pub fn trace_csv(rows: &[TraceRow]) -> String {
    let mut s = format!("{TRACE_HEADER}\npath,round,lambda,delta,mu,score,h,edges,iterations,converged\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{},{},{},{},{},{},{}", r.path, r.round, r.lambda, r.delta, r.mu, r.score, r.acyclicity, r.edges, r.iterations, r.converged);
    }
    s
}

pub fn write_trace(rows: &[TraceRow], path: &Path) -> Result<()> {
    write_string(path, &trace_csv(rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        assert_eq!(SolverConfig::parse("").unwrap(), SolverConfig::default());
    }

    #[test]
    fn keys_override_defaults() {
        let cfg = SolverConfig::parse("gamma = 0.25\nacyclicity = \"logdet\"\nseed = 7\n").unwrap();
        assert_eq!(cfg.gamma, 0.25);
        assert_eq!(cfg.acyclicity, AcyclicityKind::Logdet);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.lambda0, 0.05);
    }

    #[test]
    fn rejects_unknown_and_invalid() {
        assert!(matches!(SolverConfig::parse("lamda0 = 1"), Err(Error::Config(_))));
        assert!(matches!(SolverConfig::parse("gamma = 1.5"), Err(Error::Config(_))));
        assert!(matches!(SolverConfig::parse("mu_schedule = []"), Err(Error::Config(_))));
    }

    #[test]
    fn trace_has_header_and_rows() {
        let rows = vec![TraceRow { path: 0, round: 0, lambda: 0.05, delta: 0.2, mu: 1.0, score: 1.5, acyclicity: 0.0, edges: 2, iterations: 12, converged: true }];
        let text = trace_csv(&rows);
        assert!(text.starts_with(TRACE_HEADER));
        assert_eq!(text.lines().nth(2).unwrap(), "0,0,0.05,0.2,1,1.5,0,2,12,true");
    }
}
