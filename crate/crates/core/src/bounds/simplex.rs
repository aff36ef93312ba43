//! Exact tableau simplex for `max cᵀx` subject to `Ax ≤ b`, `x ≥ 0`,
//! `b ≥ 0`, with Bland's rule.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct LpOptimum {
    pub value: Rational,
    /// Primal solution, one entry per column of `A`.
    pub primal: Vec<Rational>,
    /// Dual solution, one entry per row of `A`.
    pub dual: Vec<Rational>,
    pub pivots: usize,
}

pub fn maximize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Result<LpOptimum> {
    let rows = a.len();
    let cols = c.len();
    if b.len() != rows || a.iter().any(|r| r.len() != cols) {
        return Err(Error::param("inconsistent LP dimensions"));
    }
    if b.iter().any(|v| v < &Rational::zero()) {
        return Err(Error::param("LP right-hand side must be nonnegative"));
    }
    let width = cols + rows;
    let mut table: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut full = row.clone();
            full.extend((0..rows).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            full
        })
        .collect();
    let mut rhs: Vec<Rational> = b.to_vec();
    let mut reduced: Vec<Rational> = c.iter().cloned().chain((0..rows).map(|_| Rational::zero())).collect();
    let mut value = Rational::zero();
    let mut basis: Vec<usize> = (cols..width).collect();
    let mut pivots = 0;

    while let Some(enter) = (0..width).find(|&j| reduced[j] > Rational::zero()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..rows {
            if table[i][enter] > Rational::zero() {
                let ratio = &rhs[i] / &table[i][enter];
                let better = match &leave {
                    None => true,
                    Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leave else {
            return Err(Error::fault("LP is unbounded"));
        };
        let pivot = table[row][enter].clone();
        for v in table[row].iter_mut() {
            *v /= &pivot;
        }
        rhs[row] /= &pivot;
        let pivot_row = table[row].clone();
        let pivot_rhs = rhs[row].clone();
        for i in 0..rows {
            if i == row || table[i][enter].is_zero() {
                continue;
            }
            let factor = table[i][enter].clone();
            for (v, p) in table[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            rhs[i] -= &factor * &pivot_rhs;
        }
        let factor = reduced[enter].clone();
        for (v, p) in reduced.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v -= &factor * p;
            }
        }
        value += &factor * &pivot_rhs;
        basis[row] = enter;
        pivots += 1;
    }

    let mut primal = vec![Rational::zero(); cols];
    for (i, &j) in basis.iter().enumerate() {
        if j < cols {
            primal[j] = rhs[i].clone();
        }
    }
    let dual = (0..rows).map(|i| -reduced[cols + i].clone()).collect();
    Ok(LpOptimum {
        value,
        primal,
        dual,
        pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn rows(data: &[&[i64]]) -> Vec<Vec<Rational>> {
        data.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn textbook_instance() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → 36 at (2, 6).
        let a = rows(&[&[1, 0], &[0, 2], &[3, 2]]);
        let r = maximize(&a, &[int(4), int(12), int(18)], &[int(3), int(5)]).unwrap();
        assert_eq!(r.value, int(36));
        assert_eq!(r.primal, vec![int(2), int(6)]);
        assert_eq!(r.dual, vec![int(0), ratio(3, 2), int(1)]);
    }

    #[test]
    fn unbounded_is_reported() {
        let a = rows(&[&[1, -1]]);
        assert!(maximize(&a, &[int(1)], &[int(1), int(1)]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Strong duality and feasibility on random packing instances.
        #[test]
        fn duality_holds(entries in proptest::collection::vec(0i64..3, 12), costs in proptest::collection::vec(1i64..4, 4)) {
            let a: Vec<Vec<Rational>> = entries.chunks(4).map(|r| r.iter().map(|&v| int(v)).collect()).collect();
            // Keep the LP bounded: every column needs a positive entry.
            let mut a = a;
            for j in 0..4 {
                if a.iter().all(|r| r[j] == int(0)) {
                    a[j % 3][j] = int(1);
                }
            }
            let b = vec![int(1); 3];
            let c: Vec<Rational> = costs.iter().map(|&v| int(v)).collect();
            let r = maximize(&a, &b, &c).unwrap();
            let dual_value: Rational = r.dual.iter().sum();
            prop_assert_eq!(&dual_value, &r.value);
            for (i, row) in a.iter().enumerate() {
                let lhs: Rational = row.iter().zip(&r.primal).map(|(x, y)| x * y).sum();
                prop_assert!(lhs <= b[i]);
            }
            for j in 0..4 {
                let lhs: Rational = (0..3).map(|i| &a[i][j] * &r.dual[i]).sum();
                prop_assert!(lhs >= c[j]);
            }
            prop_assert!(r.dual.iter().all(|y| *y >= int(0)));
        }
    }
}
