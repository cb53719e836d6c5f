// SPDX-License-Identifier: Apache-2.0
//! In-place transforms over the subset lattice of `{0, .., p-1}`, on arrays
//! indexed by bit mask. Each runs in `O(p·2^p)`.

/// `a[T] ← Σ_{S ⊆ T} a[S]`.
pub fn subset_sum(a: &mut [f64]) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    let mut bit = 1;
    while bit < n {
        for mask in 0..n {
            if mask & bit != 0 {
                a[mask] += a[mask ^ bit];
            }
        }
        bit <<= 1;
    }
}

/// Inverse of [`subset_sum`]: `a[T] ← Σ_{S ⊆ T} (-1)^{|T∖S|} a[S]`.
pub fn mobius(a: &mut [f64]) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    let mut bit = 1;
    while bit < n {
        for mask in 0..n {
            if mask & bit != 0 {
                a[mask] -= a[mask ^ bit];
            }
        }
        bit <<= 1;
    }
}

/// `a[S] ← Σ_{T ⊇ S} a[T]`.
pub fn superset_sum(a: &mut [f64]) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    let mut bit = 1;
    while bit < n {
        for mask in 0..n {
            if mask & bit == 0 {
                a[mask] += a[mask | bit];
            }
        }
        bit <<= 1;
    }
}
