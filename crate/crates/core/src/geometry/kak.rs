use super::{ProjHyperplane, ProjPoint, SquareMatrix};
use crate::error::{Error, Result};
use crate::geometry::matrix::INVERTIBILITY_RATIO;
use crate::linalg::{svd, Dense};
use crate::scalar::Real;

/// `a_2 / a_1` above this value marks the top singular value as tied.
pub const DEGENERACY_RATIO: f64 = 1.0 - 1e-9;

/// `g = k · diag(a) · u` with `k`, `u` orthogonal and `a` non-increasing.
///
/// The privileged choice is the one produced by the crate's Jacobi SVD with
/// every column of `k` sign-canonicalized (first significant entry positive)
/// and the matching row of `u` flipped to preserve the product.
#[derive(Debug, Clone, PartialEq)]
pub struct KakDecomposition<T> {
    pub k: Dense<T>,
    pub a: Vec<T>,
    pub u: Dense<T>,
    /// `a_2 / a_1 > 1 - 1e-9`: attracting point and repelling hyperplane are
    /// not well defined.
    pub degenerate: bool,
}

impl<T: Real> KakDecomposition<T> {
    pub fn gap_ratio(&self) -> T {
        gap_ratio(&self.a)
    }

    /// `v_g^+ = k_g [e_1]`.
    pub fn attracting_point(&self) -> ProjPoint<T> {
        ProjPoint::new(&self.k.column(0)).expect("orthogonal column is a unit vector")
    }

    /// `H_g^- = (R u_g^{-1} e_1)^⊥`, normal `u_g^T e_1` (first row of `u_g`).
    pub fn repelling_hyperplane(&self) -> ProjHyperplane<T> {
        ProjHyperplane::from_normal(self.u.row(0)).expect("orthogonal row is a unit vector")
    }

    pub fn reconstruct(&self) -> Dense<T> {
        self.k.matmul(&Dense::from_diagonal(&self.a)).matmul(&self.u)
    }

    /// `δ(v_g^+, H_g^-)`.
    pub fn delta(&self) -> T {
        crate::linalg::dot(&self.k.column(0), self.u.row(0)).abs().min(T::one())
    }
}

pub(crate) fn gap_ratio<T: Real>(a: &[T]) -> T {
    if a.len() < 2 {
        T::zero()
    } else {
        a[1] / a[0]
    }
}

pub fn kak<T: Real>(g: &SquareMatrix<T>) -> Result<KakDecomposition<T>> {
    let d = svd(g.dense());
    let largest = d.s[0];
    let smallest = *d.s.last().unwrap();
    if !(smallest > T::lit(INVERTIBILITY_RATIO) * largest) {
        return Err(Error::SingularInput { smallest: smallest.as_f64(), largest: largest.as_f64() });
    }
    let degenerate = gap_ratio(&d.s) > T::lit(DEGENERACY_RATIO);
    Ok(KakDecomposition { k: d.u, a: d.s, u: d.vt, degenerate })
}

pub fn attracting_point<T: Real>(g: &SquareMatrix<T>) -> Result<ProjPoint<T>> {
    Ok(kak(g)?.attracting_point())
}

pub fn repelling_hyperplane<T: Real>(g: &SquareMatrix<T>) -> Result<ProjHyperplane<T>> {
    Ok(kak(g)?.repelling_hyperplane())
}
