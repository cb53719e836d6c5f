// SPDX-License-Identifier: Apache-2.0
//! Orthant-wise limited-memory quasi-Newton minimization of
//! `f(x) + Σ_k c_k |x_k|` with `f` smooth. With all `c_k = 0` this is plain
//! L-BFGS with a backtracking Armijo search.

use std::collections::VecDeque;

#[derive(Clone, Copy, Debug)]
pub(crate) struct OptimOptions {
    pub max_iter: usize,
    /// Stop when the sup-norm of the (pseudo-)gradient falls below this.
    pub grad_tol: f64,
    /// Stop when the relative decrease over one step falls below this.
    pub ftol: f64,
    pub memory: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct OptimResult {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug)]
pub(crate) struct NonFinite;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn l1(x: &[f64], c: &[f64]) -> f64 {
    x.iter().zip(c).map(|(v, w)| w * v.abs()).sum()
}

/// Steepest-descent direction of the composite objective, negated.
fn pseudo_gradient(x: &[f64], g: &[f64], c: &[f64], free: &[bool], out: &mut [f64]) {
    for k in 0..x.len() {
        out[k] = if !free[k] {
            0.0
        } else if c[k] == 0.0 {
            g[k]
        } else if x[k] > 0.0 {
            g[k] + c[k]
        } else if x[k] < 0.0 {
            g[k] - c[k]
        } else if g[k] + c[k] < 0.0 {
            g[k] + c[k]
        } else if g[k] - c[k] > 0.0 {
            g[k] - c[k]
        } else {
            0.0
        };
    }
}

/// `f` writes the gradient of the smooth part into its second argument and
/// returns the smooth value. Entries with `free[k] == false` never move.
pub(crate) fn minimize<F>(
    mut f: F,
    x0: Vec<f64>,
    c: &[f64],
    free: &[bool],
    opts: OptimOptions,
) -> Result<OptimResult, NonFinite>
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let n = x0.len();
    let mut x = x0;
    let mut g = vec![0.0; n];
    let mut value = f(&x, &mut g) + l1(&x, c);
    if !value.is_finite() || g.iter().any(|v| !v.is_finite()) {
        return Err(NonFinite);
    }
    let mut pg = vec![0.0; n];
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(opts.memory);
    let mut d = vec![0.0; n];
    let mut alpha = vec![0.0; opts.memory];
    let mut x_new = vec![0.0; n];
    let mut g_new = vec![0.0; n];

    for iter in 0..opts.max_iter {
        pseudo_gradient(&x, &g, c, free, &mut pg);
        let pg_norm = pg.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if pg_norm <= opts.grad_tol {
            return Ok(OptimResult { x, iterations: iter, converged: true });
        }

        // Two-loop recursion on the pseudo-gradient.
        d.iter_mut().zip(&pg).for_each(|(di, v)| *di = -v);
        for (k, (s, y, rho)) in history.iter().enumerate().rev() {
            alpha[k] = rho * dot(s, &d);
            d.iter_mut().zip(y).for_each(|(di, yi)| *di -= alpha[k] * yi);
        }
        let gamma = match history.back() {
            Some((s, y, _)) => dot(s, y) / dot(y, y),
            None => 1.0 / pg.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0),
        };
        d.iter_mut().for_each(|di| *di *= gamma);
        for (k, (s, y, rho)) in history.iter().enumerate() {
            let beta = rho * dot(y, &d);
            d.iter_mut().zip(s).for_each(|(di, si)| *di += (alpha[k] - beta) * si);
        }
        for k in 0..n {
            if !free[k] || (c[k] != 0.0 && d[k] * pg[k] >= 0.0) {
                d[k] = 0.0;
            }
        }
        if dot(&d, &pg) >= 0.0 {
            // Curvature memory pointed uphill; restart from steepest descent.
            history.clear();
            let scale = 1.0 / pg_norm.max(1.0);
            d.iter_mut().zip(&pg).for_each(|(di, v)| *di = -v * scale);
        }

        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            for k in 0..n {
                let t = x[k] + step * d[k];
                let orthant = if x[k] != 0.0 { x[k].signum() } else { -pg[k].signum() };
                x_new[k] = if c[k] != 0.0 && t * orthant <= 0.0 { 0.0 } else { t };
            }
            let s_new = f(&x_new, &mut g_new);
            let v_new = s_new + l1(&x_new, c);
            let decrease: f64 = pg.iter().zip(x_new.iter().zip(&x)).map(|(p, (a, b))| p * (a - b)).sum();
            if v_new.is_finite() && g_new.iter().all(|v| v.is_finite()) && v_new <= value + 1e-4 * decrease {
                accepted = true;
                let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
                let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
                let sy = dot(&s, &y);
                if sy > 1e-12 * dot(&y, &y).max(1e-300) && sy > 0.0 {
                    if history.len() == opts.memory {
                        history.pop_front();
                    }
                    history.push_back((s, y, 1.0 / sy));
                }
                let rel = (value - v_new) / value.abs().max(1.0);
                std::mem::swap(&mut x, &mut x_new);
                std::mem::swap(&mut g, &mut g_new);
                value = v_new;
                if rel <= opts.ftol {
                    return Ok(OptimResult { x, iterations: iter + 1, converged: true });
                }
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // No descent along the direction at machine precision: stationary
            // as far as this method can tell.
            return Ok(OptimResult { x, iterations: iter, converged: pg_norm <= opts.grad_tol.sqrt() });
        }
    }
    Ok(OptimResult { x, iterations: opts.max_iter, converged: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> OptimOptions {
        OptimOptions { max_iter: 500, grad_tol: 1e-9, ftol: 0.0, memory: 8 }
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64], g: &mut [f64]| {
            let (a, b) = (x[0], x[1]);
            g[0] = -2.0 * (1.0 - a) - 400.0 * a * (b - a * a);
            g[1] = 200.0 * (b - a * a);
            (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2)
        };
        let r = minimize(f, vec![-1.2, 1.0], &[0.0, 0.0], &[true, true], opts()).unwrap();
        assert!(r.converged, "{r:?}");
        assert!((r.x[0] - 1.0).abs() < 1e-6 && (r.x[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn lasso_soft_thresholds() {
        // ½(x - a)² + c|x| has minimizer sign(a)·max(|a| - c, 0).
        let a = [3.0, -0.5, 0.2, -2.0];
        let c = [1.0, 1.0, 0.0, 0.5];
        let f = |x: &[f64], g: &mut [f64]| {
            let mut v = 0.0;
            for k in 0..4 {
                g[k] = x[k] - a[k];
                v += 0.5 * (x[k] - a[k]).powi(2);
            }
            v
        };
        let r = minimize(f, vec![0.1; 4], &c, &[true; 4], opts()).unwrap();
        let want = [2.0, 0.0, 0.2, -1.5];
        for k in 0..4 {
            assert!((r.x[k] - want[k]).abs() < 1e-8, "{k}: {}", r.x[k]);
        }
    }

    #[test]
    fn frozen_entries_stay_put() {
        let f = |x: &[f64], g: &mut [f64]| {
            g[0] = 2.0 * (x[0] - 1.0);
            g[1] = 2.0 * (x[1] - 1.0);
            (x[0] - 1.0).powi(2) + (x[1] - 1.0).powi(2)
        };
        let r = minimize(f, vec![0.0, 0.0], &[0.0, 0.0], &[true, false], opts()).unwrap();
        assert!((r.x[0] - 1.0).abs() < 1e-8);
        assert_eq!(r.x[1], 0.0);
    }

    #[test]
    fn non_finite_start_is_reported() {
        let f = |_: &[f64], _: &mut [f64]| f64::NAN;
        assert!(minimize(f, vec![0.0], &[0.0], &[true], opts()).is_err());
    }
}
