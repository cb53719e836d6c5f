// SPDX-License-Identifier: Apache-2.0
//! Matrix exponential by scaling and squaring of a truncated Taylor series.
//!
//! The acyclicity function only ever exponentiates elementwise squares, which
//! are nonnegative; for such matrices every Taylor term is nonnegative, so the
//! series has no cancellation and the result is accurate to a few ulps
//! relative to each entry.

use nalgebra::DMatrix;

const MAX_TERMS: usize = 40;

pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.nrows();
    let norm = a.row_iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    // Scale so the series argument has ∞-norm at most 1/2.
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let b = a / 2f64.powi(squarings as i32);
    let mut sum = DMatrix::<f64>::identity(n, n);
    let mut term = DMatrix::<f64>::identity(n, n);
    for k in 1..=MAX_TERMS {
        term = &term * &b / k as f64;
        sum += &term;
        if term.amax() <= f64::EPSILON * 1e-2 * sum.amax() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_two_by_two() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let e = expm(&a);
        let (c, s) = (1f64.cosh(), 1f64.sinh());
        assert!((e[(0, 0)] - c).abs() < 1e-14);
        assert!((e[(0, 1)] - s).abs() < 1e-14);
    }

    #[test]
    fn nilpotent_is_exact() {
        let a = DMatrix::from_row_slice(3, 3, &[0.0, 2.0, 0.0, 0.0, 0.0, 3.0, 0.0, 0.0, 0.0]);
        let e = expm(&a);
        let want = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 0.0, 1.0, 3.0, 0.0, 0.0, 1.0]);
        assert!((e - want).amax() < 1e-14);
    }

    #[test]
    fn agrees_with_nalgebra_pade() {
        use rand::Rng;
        let mut r = crate::rng::stream(3, 0);
        for n in [2usize, 5, 12, 40] {
            for scale in [0.1, 1.0, 4.0] {
                let a = DMatrix::from_fn(n, n, |_, _| scale * r.random::<f64>() / n as f64 * 3.0);
                let mine = expm(&a);
                let theirs = a.clone().exp();
                let rel = (&mine - &theirs).amax() / theirs.amax();
                assert!(rel < 1e-10, "n={n} scale={scale} rel={rel}");
            }
        }
    }
}
