//! Smith normal form over arbitrary-precision integers.
//!
//! Pivoting always picks the entry of smallest nonzero absolute value in the
//! remaining block, so the output is deterministic for a given input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<BigInt>>;

/// `U · A · V = diag(d₁, …, d_r, 0, …)` with `d₁ | d₂ | …`, all `dᵢ > 0`.
///
/// Only `V` is tracked; `U` is not needed by any caller.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub rows: usize,
    pub cols: usize,
    /// Nonzero diagonal entries, in divisibility order.
    pub diagonal: Vec<BigInt>,
    /// Unimodular column transform `V` (cols × cols).
    pub column_transform: Matrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

pub fn from_i64(rows: &[Vec<i64>]) -> Matrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn smith_normal_form(input: &Matrix, cols: usize) -> SmithForm {
    let rows = input.len();
    let mut a: Matrix = input.clone();
    for r in &a {
        assert_eq!(r.len(), cols, "ragged matrix");
    }
    let mut v: Matrix = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();

    let swap_cols = |a: &mut Matrix, v: &mut Matrix, i: usize, j: usize| {
        if i == j {
            return;
        }
        for r in a.iter_mut() {
            r.swap(i, j);
        }
        for r in v.iter_mut() {
            r.swap(i, j);
        }
    };
    // col_j -= q * col_i
    let sub_col = |a: &mut Matrix, v: &mut Matrix, j: usize, i: usize, q: &BigInt| {
        for r in a.iter_mut() {
            let t = &r[i] * q;
            r[j] -= t;
        }
        for r in v.iter_mut() {
            let t = &r[i] * q;
            r[j] -= t;
        }
    };

    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the block a[t.., t..]
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        swap_cols(&mut a, &mut v, t, pj);

        let mut clean = true;
        for i in t + 1..rows {
            if !a[i][t].is_zero() {
                let q = a[i][t].div_floor(&a[t][t]);
                let (head, tail) = a.split_at_mut(i);
                for (x, y) in tail[0].iter_mut().zip(head[t].iter()) {
                    *x -= &q * y;
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
        }
        for j in t + 1..cols {
            if !a[t][j].is_zero() {
                let q = a[t][j].div_floor(&a[t][t]);
                sub_col(&mut a, &mut v, j, t, &q);
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            // a smaller remainder appeared; pick a new pivot
            continue;
        }
        // divisibility: the pivot must divide every remaining entry
        let mut fix = None;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if !a[i][j].is_multiple_of(&a[t][t]) {
                    fix = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = fix {
            // add row i to row t and redo this step
            let (head, tail) = a.split_at_mut(i);
            for (x, y) in head[t].iter_mut().zip(tail[0].iter()) {
                *x += y;
            }
            continue;
        }
        if a[t][t].is_negative() {
            for r in a.iter_mut() {
                r[t] = -&r[t];
            }
            for r in v.iter_mut() {
                r[t] = -&r[t];
            }
        }
        t += 1;
    }

    let diagonal = (0..rows.min(cols))
        .map(|i| a[i][i].clone())
        .take_while(|d| !d.is_zero())
        .collect();
    SmithForm {
        rows,
        cols,
        diagonal,
        column_transform: v,
    }
}

/// Row-major product `a · b`.
pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|r| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &r[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}
