//! Exterior powers `∧^p g` as compound matrices of `p x p` minors, in the
//! lexicographic basis `e_{i_1} ∧ ... ∧ e_{i_p}`, `i_1 < ... < i_p`.

use itertools::Itertools;

use super::SquareMatrix;
use crate::error::{Error, Result};
use crate::linalg::Dense;
use crate::scalar::Real;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Index subsets of size `p` of `0..d` in lexicographic order.
pub fn wedge_basis(d: usize, p: usize) -> Vec<Vec<usize>> {
    (0..d).combinations(p).collect()
}

/// Compound matrix on an unchecked dense matrix.
pub fn compound<T: Real>(g: &Dense<T>, p: usize) -> Dense<T> {
    let d = g.dim();
    if p == 1 {
        return g.clone();
    }
    let basis = wedge_basis(d, p);
    let m = basis.len();
    let mut out = Dense::zeros(m);
    for (r, rows) in basis.iter().enumerate() {
        for (c, cols) in basis.iter().enumerate() {
            out[(r, c)] = g.minor_matrix(rows, cols).determinant();
        }
    }
    out
}

/// `∧^p g` for `1 <= p <= d`, a `C(d,p) x C(d,p)` invertible matrix.
pub fn wedge_power<T: Real>(g: &SquareMatrix<T>, p: usize) -> Result<SquareMatrix<T>> {
    let d = g.dim();
    if p == 0 || p > d {
        return Err(Error::Domain(format!("wedge degree {p} outside [1, {d}]")));
    }
    SquareMatrix::from_dense_unchecked(compound(g.dense(), p))
}

/// Coordinates of `v_1 ∧ ... ∧ v_p` in the lexicographic basis.
pub fn wedge_vectors<T: Real>(vs: &[&[T]]) -> Vec<T> {
    let p = vs.len();
    let d = vs[0].len();
    wedge_basis(d, p)
        .iter()
        .map(|idx| {
            let data = idx.iter().flat_map(|&i| vs.iter().map(move |v| v[i])).collect();
            Dense::from_row_major(p, data).determinant()
        })
        .collect()
}
