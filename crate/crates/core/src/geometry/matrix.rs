use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{svd, Dense};
use crate::scalar::Real;

/// Smallest admissible ratio `a_d(g) / a_1(g)` for an invertible matrix.
pub const INVERTIBILITY_RATIO: f64 = 1e-12;

/// Dense invertible `d x d` real matrix with finite entries.
///
/// Serializes as a JSON array of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<T> {
    inner: Dense<T>,
}

impl<T: Real> SquareMatrix<T> {
    /// Builds from rows, checking shape, finiteness and invertibility
    /// (`a_d(g) > max(1e-12, 10 d eps) * a_1(g)`).
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        Self::new(Dense::from_row_major(n, rows.into_iter().flatten().collect()))
    }

    pub fn new(inner: Dense<T>) -> Result<Self> {
        if inner.dim() == 0 {
            return Err(Error::NotSquare);
        }
        if !inner.all_finite() {
            return Err(Error::NonFinite);
        }
        check_invertible(&inner)?;
        Ok(Self { inner })
    }

    /// Wraps a matrix that is invertible by construction (products, wedge
    /// powers, transposes of checked matrices). Finiteness is still checked.
    pub fn from_dense_unchecked(inner: Dense<T>) -> Result<Self> {
        if !inner.all_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self { inner })
    }

    pub fn identity(d: usize) -> Self {
        Self { inner: Dense::identity(d) }
    }

    /// Diagonal matrix; panics on a zero entry.
    pub fn diagonal(diag: &[T]) -> Self {
        assert!(diag.iter().all(|&x| x != T::zero() && x.is_finite()));
        Self { inner: Dense::from_diagonal(diag) }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[inline]
    pub fn dense(&self) -> &Dense<T> {
        &self.inner
    }

    pub fn into_dense(self) -> Dense<T> {
        self.inner
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.inner[(i, j)]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.inner.rows()
    }

    pub fn transpose(&self) -> Self {
        Self { inner: self.inner.transpose() }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        Self { inner: self.inner.matmul(&rhs.inner) }
    }

    pub fn scaled(&self, c: T) -> Self {
        Self { inner: self.inner.scaled(c) }
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        self.inner.mul_vec(v)
    }

    pub fn determinant(&self) -> T {
        self.inner.determinant()
    }

    pub fn inverse(&self) -> Self {
        let inv = self.inner.inverse().expect("checked invertible");
        Self { inner: inv }
    }

    /// Operator (spectral) norm.
    pub fn operator_norm(&self) -> T {
        svd(&self.inner).s[0]
    }

    /// Converts the scalar type, e.g. `f64 -> f32`.
    pub fn cast<U: Real>(&self) -> SquareMatrix<U> {
        let data = self.inner.as_slice().iter().map(|&x| U::lit(x.as_f64())).collect();
        SquareMatrix { inner: Dense::from_row_major(self.dim(), data) }
    }
}

fn check_invertible<T: Real>(m: &Dense<T>) -> Result<()> {
    let s = svd(m).s;
    let largest = s[0];
    let smallest = *s.last().unwrap();
    let ratio = T::lit(INVERTIBILITY_RATIO).max(T::lit(10.0) * T::epsilon() * T::from_usize_lossy(m.dim()));
    if !(largest > T::zero()) || !(smallest > ratio * largest) {
        return Err(Error::SingularInput { smallest: smallest.as_f64(), largest: largest.as_f64() });
    }
    Ok(())
}

impl<T: Real + Serialize> Serialize for SquareMatrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for SquareMatrix<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<T>>::deserialize(d)?;
        SquareMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}
