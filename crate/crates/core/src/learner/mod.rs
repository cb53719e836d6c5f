// SPDX-License-Identifier: Apache-2.0
//! Score-based structure learning: the logistic score of a coefficient
//! matrix `H`, the quasi-MCP edge penalty, an acyclicity-penalized solver with
//! a `(λ, δ)` continuation, and the two-stage learner built on it.

mod binotears;
mod config;
mod logistic;
mod optim;
mod params;
mod penalty;
mod score;
mod select;
mod solve;

pub use binotears::{binotears, BinotearsResult};
pub use config::{trace_csv, write_trace, AcyclicityKind, SolverConfig, TRACE_HEADER};
pub use logistic::{logistic_fit, logistic_fit_penalized, logistic_fit_weighted, LogisticFit};
pub use params::{ParamMatrix, ParamMode};
pub use penalty::{quasi_mcp, PenaltyParams};
pub use score::{
    population_score, population_score_with_grad, regularized_score, regularized_score_with_grad, score,
    score_with_grad, ScoreInput,
};
pub use solve::{solve, solve_in_order, SolveResult, MAX_FULL_SOLVE_NODES, MAX_LINEAR_SOLVE_NODES};

/// One inner solve of the continuation path.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    /// 0 for the continuous path, then one index per order-restricted refit.
    pub path: usize,
    pub round: usize,
    pub lambda: f64,
    pub delta: f64,
    pub mu: f64,
    /// Unpenalized score after the solve.
    pub score: f64,
    /// `h(W(H))` after the solve.
    pub acyclicity: f64,
    /// Entries of `W(H)` at or above the edge threshold.
    pub edges: usize,
    /// Inner-solver iterations.
    pub iterations: usize,
    pub converged: bool,
}
