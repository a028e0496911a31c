//! Dense exact linear algebra over the rationals.

use num::{Signed, Zero};

use crate::ratfn::Q;

pub type Matrix = Vec<Vec<Q>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Q::zero(); cols]; rows]
}

pub fn cols(m: &Matrix) -> usize {
    m.first().map_or(0, Vec::len)
}

/// `a * b`, with `a` of size `r x k` and `b` of size `k x c`.
pub fn mul(a: &Matrix, b: &Matrix, inner: usize, out_cols: usize) -> Matrix {
    let mut out = zeros(a.len(), out_cols);
    for (i, row) in a.iter().enumerate() {
        for (k, x) in row.iter().enumerate().take(inner) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b[k].iter().enumerate() {
                if !y.is_zero() {
                    out[i][j] += x * y;
                }
            }
        }
    }
    out
}

pub fn is_zero(m: &Matrix) -> bool {
    m.iter().all(|r| r.iter().all(Zero::is_zero))
}

/// Rank by Gaussian elimination with exact pivots.
pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    let (rows, ncols) = (a.len(), cols(m));
    let mut r = 0;
    for c in 0..ncols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &pivot;
            for j in c..ncols {
                if !a[r][j].is_zero() {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        r += 1;
    }
    r
}

/// Largest absolute entry, for diagnostics.
pub fn max_abs(m: &Matrix) -> Q {
    m.iter()
        .flat_map(|r| r.iter())
        .map(|x| x.abs())
        .fold(Q::zero(), |a, b| if b > a { b } else { a })
}
