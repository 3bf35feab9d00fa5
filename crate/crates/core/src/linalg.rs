//! Gaussian elimination over `F_p(t_1, ..., t_n)`.
//!
//! Rows are cleared of denominators and reduced fraction-free (Bareiss), so
//! every intermediate entry is a polynomial minor and the only divisions are
//! exact. Pivots are the smallest nonzero candidate in the column under the
//! graded-lex ordering of polynomials.

use alloc::vec::Vec;

use crate::poly::Poly;
use crate::ratfunc::RatFunc;

/// Multiplies a row by the least common multiple of its denominators.
fn clear_row(row: &[RatFunc]) -> Vec<Poly> {
    let mut lcm: Option<Poly> = None;
    for x in row.iter().filter(|x| !x.is_zero() && !x.den().is_one()) {
        lcm = Some(match lcm {
            None => x.den().clone(),
            Some(l) => {
                let g = l.gcd(x.den());
                l.mul(&x.den().exact_div(&g).expect("gcd divides"))
            }
        });
    }
    row.iter()
        .map(|x| match &lcm {
            None => x.num().clone(),
            Some(l) => x
                .num()
                .mul(&l.exact_div(x.den()).expect("denominator divides the lcm")),
        })
        .collect()
}

/// Fraction-free row echelon form in place; returns the pivot columns.
fn bareiss(rows: &mut [Vec<Poly>]) -> Vec<usize> {
    let ncols = rows.first().map(Vec::len).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut prev: Option<Poly> = None;
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let best = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by(|&a, &b| rows[a][c].cmp(&rows[b][c]));
        let Some(best) = best else { continue };
        rows.swap(r, best);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = &pivot_row[c];
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in c..ncols {
                let mut x = row[j].mul(pivot);
                if !factor.is_zero() {
                    x = x.sub(&factor.mul(&pivot_row[j]));
                }
                if let Some(d) = &prev {
                    x = x.exact_div(d).expect("Bareiss division is exact");
                }
                row[j] = x;
            }
        }
        prev = Some(pivot.clone());
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank and pivot columns of a matrix.
pub fn rank(matrix: &[Vec<RatFunc>]) -> (usize, Vec<usize>) {
    let mut rows: Vec<Vec<Poly>> = matrix.iter().map(|r| clear_row(r)).collect();
    let pivots = bareiss(&mut rows);
    (pivots.len(), pivots)
}

/// One solution of `a x = b` (free variables set to zero), or `None` if inconsistent.
pub fn solve(a: &[Vec<RatFunc>], b: &[RatFunc]) -> Option<Vec<RatFunc>> {
    assert_eq!(a.len(), b.len(), "row count");
    let ncols = a.first().map(Vec::len).unwrap_or(0);
    let (nv, p) = match b.first() {
        Some(x) => (x.nvars(), x.p()),
        None => return Some(Vec::new()),
    };
    let mut rows: Vec<Vec<Poly>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            clear_row(&r)
        })
        .collect();
    let pivots = bareiss(&mut rows);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    // back substitution over the fraction field
    let mut x = alloc::vec![RatFunc::zero(nv, p); ncols];
    for (row, &c) in rows.iter().zip(&pivots).rev() {
        let mut acc = RatFunc::from_poly(row[ncols].clone());
        for (j, xj) in x.iter().enumerate().skip(c + 1) {
            if !xj.is_zero() && !row[j].is_zero() {
                acc = acc.sub(&RatFunc::from_poly(row[j].clone()).mul(xj));
            }
        }
        x[c] = acc
            .div(&RatFunc::from_poly(row[c].clone()))
            .expect("pivot is nonzero");
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn solves_a_small_system_over_f2_t() {
        let t = RatFunc::var(1, 2, 0);
        let one = RatFunc::one(1, 2);
        let zero = RatFunc::zero(1, 2);
        // [t 1; 1 0] x = [1; t]  =>  x = (t, 1 + t^2)
        let a = vec![
            vec![t.clone(), one.clone()],
            vec![one.clone(), zero.clone()],
        ];
        let b = vec![one.clone(), t.clone()];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x[0], t);
        assert_eq!(x[1], one.add(&t.mul(&t)));
        let singular = vec![vec![t.clone(), one.clone()], vec![t.mul(&t), t.clone()]];
        assert_eq!(rank(&singular).0, 1);
        assert!(solve(&singular, &[one.clone(), zero]).is_none());
    }
}
