use serde::{Deserialize, Serialize};

use super::SquareMatrix;
use crate::error::Result;
use crate::linalg::{eigenvalues, svd, Dense};
use crate::scalar::Real;

/// Natural logs of the singular values, non-increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CartanVector<T>(pub Vec<T>);

/// Natural logs of the eigenvalue moduli, non-increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JordanVector<T>(pub Vec<T>);

macro_rules! log_vector {
    ($ty:ident) => {
        impl<T: Real> $ty<T> {
            #[inline]
            pub fn values(&self) -> &[T] {
                &self.0
            }

            pub fn sum(&self) -> T {
                self.0.iter().copied().sum()
            }

            pub fn is_non_increasing(&self, slack: T) -> bool {
                self.0.windows(2).all(|w| w[1] <= w[0] + slack)
            }
        }
    };
}

log_vector!(CartanVector);
log_vector!(JordanVector);

pub(crate) fn sort_descending<T: Real>(v: &mut [T]) {
    v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
}

/// Moduli of the (possibly complex) eigenvalues, non-increasing.
pub fn dense_eigen_moduli<T: Real>(g: &Dense<T>) -> Result<Vec<T>> {
    let mut m: Vec<T> = eigenvalues(g)?.iter().map(|c| c.re.hypot(c.im)).collect();
    sort_descending(&mut m);
    Ok(m)
}

pub fn eigen_moduli<T: Real>(g: &SquareMatrix<T>) -> Result<Vec<T>> {
    dense_eigen_moduli(g.dense())
}

pub fn spectral_radius<T: Real>(g: &SquareMatrix<T>) -> Result<T> {
    Ok(eigen_moduli(g)?[0])
}

/// `ℓ(g)`.
pub fn jordan_projection<T: Real>(g: &SquareMatrix<T>) -> Result<JordanVector<T>> {
    Ok(JordanVector(eigen_moduli(g)?.into_iter().map(|x| x.ln()).collect()))
}

/// `κ(g)`.
pub fn cartan_projection<T: Real>(g: &SquareMatrix<T>) -> CartanVector<T> {
    CartanVector(svd(g.dense()).s.into_iter().map(|x| x.ln()).collect())
}
