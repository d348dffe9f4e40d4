//! Exact phase-one simplex over big rationals, used for the probabilistic
//! global-section feasibility problem. Bland's rule on both the entering and
//! leaving choices rules out cycling, so termination is unconditional.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Finds `x >= 0` with `A x = b` (all `b_i >= 0`), or `None` when the system
/// is infeasible. One artificial variable per row; feasibility holds exactly
/// when the minimized artificial mass reaches zero.
pub(crate) fn feasible_nonnegative(
    ncols: usize,
    rows: &[(Vec<BigRational>, BigRational)],
) -> Option<Vec<BigRational>> {
    let m = rows.len();
    if m == 0 {
        return Some(vec![BigRational::zero(); ncols]);
    }
    let width = ncols + m + 1; // original | artificial | rhs
    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for (i, (coeffs, b)) in rows.iter().enumerate() {
        assert_eq!(coeffs.len(), ncols);
        assert!(!b.is_negative(), "phase-one rhs must be nonnegative");
        let mut row = vec![BigRational::zero(); width];
        row[..ncols].clone_from_slice(coeffs);
        row[ncols + i] = BigRational::one();
        row[width - 1] = b.clone();
        tab.push(row);
    }
    let mut basis: Vec<usize> = (ncols..ncols + m).collect();

    // reduced costs for min(sum of artificials): z_j = c_j - sum_i T[i][j]
    let mut z = vec![BigRational::zero(); width];
    for (j, zj) in z.iter_mut().enumerate().take(ncols) {
        for row in &tab {
            *zj -= &row[j];
        }
    }

    loop {
        // Bland: smallest column index with negative reduced cost
        let entering = (0..ncols + m).find(|&j| z[j].is_negative());
        let Some(enter) = entering else { break };

        // ratio test; ties resolved towards smallest basis variable (Bland)
        let mut leave: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for i in 0..m {
            if tab[i][enter].is_positive() {
                let ratio = &tab[i][width - 1] / &tab[i][enter];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b
                            || (ratio == *b
                                && basis[i] < basis[leave.expect("best implies leave")])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let leave = leave.expect("phase-one objective is bounded below");

        // pivot
        let pivot = tab[leave][enter].clone();
        for v in tab[leave].iter_mut() {
            *v /= &pivot;
        }
        let pivot_row = tab[leave].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i == leave || row[enter].is_zero() {
                continue;
            }
            let factor = row[enter].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= &factor * p;
            }
        }
        if !z[enter].is_zero() {
            let factor = z[enter].clone();
            for (v, p) in z.iter_mut().zip(&pivot_row) {
                *v -= &factor * p;
            }
        }
        basis[leave] = enter;
    }

    // residual artificial mass decides feasibility
    let artificial_mass: BigRational = (0..m)
        .filter(|&i| basis[i] >= ncols)
        .map(|i| tab[i][width - 1].clone())
        .sum();
    if !artificial_mass.is_zero() {
        return None;
    }

    let mut x = vec![BigRational::zero(); ncols];
    for i in 0..m {
        if basis[i] < ncols {
            x[basis[i]] = tab[i][width - 1].clone();
        }
    }
    // exactness check against the original rows
    for (coeffs, b) in rows {
        let lhs: BigRational = coeffs.iter().zip(&x).map(|(c, v)| c * v).sum();
        assert_eq!(&lhs, b, "internal invariant violation: simplex certificate is inexact");
    }
    debug_assert!(x.iter().all(|v| !v.is_negative()));
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn feasible_system() {
        // x0 + x1 = 1, x0 - nothing else; solution on the simplex
        let rows = vec![
            (vec![r(1, 1), r(1, 1)], r(1, 1)),
            (vec![r(1, 1), r(0, 1)], r(1, 4)),
        ];
        let x = feasible_nonnegative(2, &rows).unwrap();
        assert_eq!(x[0], r(1, 4));
        assert_eq!(x[1], r(3, 4));
    }

    #[test]
    fn infeasible_system() {
        // x0 = 1 and x0 = 0 cannot both hold
        let rows = vec![
            (vec![r(1, 1)], r(1, 1)),
            (vec![r(1, 1)], r(0, 1)),
        ];
        assert!(feasible_nonnegative(1, &rows).is_none());

        // nonnegativity matters: x0 + x1 = 1 with x0 + x1 = 2 via scaling
        let rows = vec![
            (vec![r(1, 1), r(1, 1)], r(1, 1)),
            (vec![r(2, 1), r(2, 1)], r(3, 1)),
        ];
        assert!(feasible_nonnegative(2, &rows).is_none());
    }

    #[test]
    fn redundant_rows_are_harmless() {
        let rows = vec![
            (vec![r(1, 1), r(1, 1)], r(1, 1)),
            (vec![r(2, 1), r(2, 1)], r(2, 1)),
            (vec![r(1, 1), r(0, 1)], r(1, 2)),
        ];
        let x = feasible_nonnegative(2, &rows).unwrap();
        assert_eq!(x[0], r(1, 2));
        assert_eq!(x[1], r(1, 2));
    }

    #[test]
    fn zero_row_with_positive_rhs_is_infeasible() {
        let rows = vec![(vec![r(0, 1)], r(1, 2))];
        assert!(feasible_nonnegative(1, &rows).is_none());
    }
}
