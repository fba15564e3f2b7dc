//! Exact feasibility of `A x = b, x ≥ 0` over the rationals.
//!
//! Phase one of the simplex method with Bland's rule, in exact arithmetic.
//! Either a basic feasible solution is returned or the system is refuted.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Finds some `x ≥ 0` with `A x = b`, or `None` when none exists.
///
/// `a` is row-major with every row of the same length.
pub fn nonneg_solution(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    assert_eq!(a.len(), b.len(), "one right-hand side per row");
    let rows = a.len();
    let vars = a.first().map_or(0, Vec::len);
    let width = vars + rows + 1;

    // Tableau rows: [A | I | b] with b ≥ 0; last row holds reduced costs.
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(rows + 1);
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        assert_eq!(row.len(), vars, "ragged constraint matrix");
        let flip = rhs.is_negative();
        let mut r: Vec<BigRational> = row.iter().map(|v| if flip { -v } else { v.clone() }).collect();
        r.extend((0..rows).map(|k| {
            if k == i {
                BigRational::from_integer(1.into())
            } else {
                BigRational::zero()
            }
        }));
        r.push(if flip { -rhs } else { rhs.clone() });
        t.push(r);
    }
    let mut cost = vec![BigRational::zero(); width];
    for r in &t {
        for j in 0..vars {
            cost[j] -= &r[j];
        }
        cost[width - 1] -= &r[width - 1];
    }
    t.push(cost);
    let mut basis: Vec<usize> = (vars..vars + rows).collect();

    loop {
        let z = &t[rows];
        let Some(enter) = (0..vars + rows).find(|&j| z[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..rows {
            let coef = &t[i][enter];
            if !coef.is_positive() {
                continue;
            }
            let ratio = &t[i][width - 1] / coef;
            let better = match &leave {
                None => true,
                Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let (pr, _) = leave.expect("phase one objective is bounded below");
        pivot(&mut t, pr, enter);
        basis[pr] = enter;
    }

    if !t[rows][width - 1].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); vars];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < vars {
            x[bv] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<BigRational>], pr: usize, pc: usize) {
    let p = t[pr][pc].clone();
    for v in t[pr].iter_mut() {
        *v /= &p;
    }
    let pivot_row = t[pr].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == pr || row[pc].is_zero() {
            continue;
        }
        let f = row[pc].clone();
        for (v, pv) in row.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn check(a: &[Vec<BigRational>], b: &[BigRational], x: &[BigRational]) {
        assert!(x.iter().all(|v| !v.is_negative()));
        for (row, rhs) in a.iter().zip(b) {
            let lhs: BigRational = row.iter().zip(x).map(|(c, v)| c * v).sum();
            assert_eq!(&lhs, rhs);
        }
    }

    #[test]
    fn finds_solution() {
        let a = vec![vec![r(1, 1), r(1, 1), r(0, 1)], vec![r(1, 2), r(0, 1), r(1, 1)]];
        let b = vec![r(1, 1), r(1, 3)];
        let x = nonneg_solution(&a, &b).unwrap();
        check(&a, &b, &x);
    }

    #[test]
    fn refutes_infeasible() {
        // x + y = 1, x + y = 2
        let a = vec![vec![r(1, 1), r(1, 1)], vec![r(1, 1), r(1, 1)]];
        assert!(nonneg_solution(&a, &[r(1, 1), r(2, 1)]).is_none());
        // x - y = -1 with x, y ≥ 0 is feasible; -x - y = 1 is not
        assert!(nonneg_solution(&[vec![r(1, 1), r(-1, 1)]], &[r(-1, 1)]).is_some());
        assert!(nonneg_solution(&[vec![r(-1, 1), r(-1, 1)]], &[r(1, 1)]).is_none());
    }

    #[test]
    fn handles_redundant_rows() {
        let a = vec![vec![r(1, 1), r(1, 1)], vec![r(2, 1), r(2, 1)]];
        let b = vec![r(1, 1), r(2, 1)];
        let x = nonneg_solution(&a, &b).unwrap();
        check(&a, &b, &x);
    }
}
