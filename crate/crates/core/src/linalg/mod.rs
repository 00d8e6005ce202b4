//! Dense square-matrix kernels: products, LU determinant, one-sided Jacobi
//! SVD and Hessenberg-QR eigenvalues.
//!
//! [`Dense`] carries no invariants; it is the working representation behind
//! [`crate::SquareMatrix`] and the renormalized walk products, which can be
//! numerically rank-deficient.

mod eigen;
mod svd;

pub use eigen::eigenvalues;
pub use svd::{svd, Svd};

use std::ops::{Index, IndexMut};

use crate::scalar::Real;

/// Row-major dense `n x n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> Dense<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Panics if `data.len() != n * n`.
    pub fn from_row_major(n: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), n * n, "row-major buffer has wrong length");
        Self { n, data }
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        let n = self.n;
        assert_eq!(n, rhs.n, "dimension mismatch in matmul");
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * n..(i + 1) * n];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        debug_assert_eq!(v.len(), self.n);
        (0..self.n).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn transpose_mul_vec(&self, v: &[T]) -> Vec<T> {
        debug_assert_eq!(v.len(), self.n);
        let mut out = vec![T::zero(); self.n];
        for (i, &vi) in v.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a * vi;
            }
        }
        out
    }

    pub fn scale_in_place(&mut self, c: T) {
        for x in &mut self.data {
            *x *= c;
        }
    }

    pub fn scaled(&self, c: T) -> Self {
        let mut m = self.clone();
        m.scale_in_place(c);
        m
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|&x| x * x).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Submatrix with the given (sorted) row and column index sets.
    pub fn minor_matrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let p = rows.len();
        debug_assert_eq!(p, cols.len());
        let mut data = Vec::with_capacity(p * p);
        for &i in rows {
            for &j in cols {
                data.push(self[(i, j)]);
            }
        }
        Self { n: p, data }
    }

    /// Determinant by LU with partial pivoting (closed forms for `n <= 2`).
    pub fn determinant(&self) -> T {
        match self.n {
            0 => T::one(),
            1 => self.data[0],
            2 => self.data[0] * self.data[3] - self.data[1] * self.data[2],
            n => {
                let mut a = self.data.clone();
                let mut det = T::one();
                for c in 0..n {
                    let (piv, pmax) = (c..n)
                        .map(|r| (r, a[r * n + c].abs()))
                        .fold((c, T::zero()), |best, cur| if cur.1 > best.1 { cur } else { best });
                    if pmax == T::zero() {
                        return T::zero();
                    }
                    if piv != c {
                        for j in 0..n {
                            a.swap(c * n + j, piv * n + j);
                        }
                        det = -det;
                    }
                    let d = a[c * n + c];
                    det *= d;
                    for r in c + 1..n {
                        let f = a[r * n + c] / d;
                        if f != T::zero() {
                            for j in c + 1..n {
                                let v = a[c * n + j];
                                a[r * n + j] -= f * v;
                            }
                        }
                    }
                }
                det
            }
        }
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting; `None` if
    /// a pivot vanishes exactly.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut inv = Self::identity(n).data;
        for c in 0..n {
            let (piv, pmax) = (c..n)
                .map(|r| (r, a[r * n + c].abs()))
                .fold((c, T::zero()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax == T::zero() {
                return None;
            }
            if piv != c {
                for j in 0..n {
                    a.swap(c * n + j, piv * n + j);
                    inv.swap(c * n + j, piv * n + j);
                }
            }
            let d = a[c * n + c];
            for j in 0..n {
                a[c * n + j] /= d;
                inv[c * n + j] /= d;
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let f = a[r * n + c];
                if f != T::zero() {
                    for j in 0..n {
                        let (va, vi) = (a[c * n + j], inv[c * n + j]);
                        a[r * n + j] -= f * va;
                        inv[r * n + j] -= f * vi;
                    }
                }
            }
        }
        Some(Self { n, data: inv })
    }
}

impl<T> Index<(usize, usize)> for Dense<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Dense<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

#[inline]
pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

#[inline]
pub fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// Returns `None` for the zero vector (or one with non-finite norm).
pub fn normalized<T: Real>(a: &[T]) -> Option<Vec<T>> {
    let n = norm(a);
    if n > T::zero() && n.is_finite() {
        Some(a.iter().map(|&x| x / n).collect())
    } else {
        None
    }
}

/// Norm of the bivector `v ∧ w`, i.e. `sqrt(|v|^2 |w|^2 - <v,w>^2)` computed
/// from the 2x2 minors to avoid cancellation.
pub fn wedge2_norm<T: Real>(v: &[T], w: &[T]) -> T {
    let mut acc = T::zero();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let m = v[i] * w[j] - v[j] * w[i];
            acc += m * m;
        }
    }
    acc.sqrt()
}

/// Coordinates of `v ∧ w` in the lexicographic basis `(e_i ∧ e_j)_{i<j}`.
pub fn wedge2_coords<T: Real>(v: &[T], w: &[T]) -> Vec<T> {
    let d = v.len();
    let mut out = Vec::with_capacity(d * (d - 1) / 2);
    for i in 0..d {
        for j in i + 1..d {
            out.push(v[i] * w[j] - v[j] * w[i]);
        }
    }
    out
}

/// Sign canonicalization: flips `v` so that its first entry with magnitude
/// above `64 * eps * max|v|` is positive. Returns whether a flip happened.
pub fn canonicalize_sign<T: Real>(v: &mut [T]) -> bool {
    let scale = v.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
    let thresh = T::lit(64.0) * T::epsilon() * scale;
    if let Some(first) = v.iter().find(|x| x.abs() > thresh) {
        if *first < T::zero() {
            for x in v.iter_mut() {
                *x = -*x;
            }
            return true;
        }
    }
    false
}
