//! Points and hyperplanes of the projective space `P(R^d)` with the sine
//! metric `δ([v],[w]) = |v ∧ w| / (|v| |w|)`.

use serde::{Deserialize, Serialize};

use super::SquareMatrix;
use crate::error::{Error, Result};
use crate::linalg::{canonicalize_sign, dot, normalized, wedge2_norm};
use crate::scalar::Real;

/// A line `[v]`, stored as a unit vector whose first significant coordinate
/// is positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjPoint<T> {
    vec: Vec<T>,
}

/// A projective hyperplane `[ker f]`, stored by its unit normal (the point
/// `[f]` of the dual projective space), sign-canonicalized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjHyperplane<T> {
    normal: Vec<T>,
}

fn canonical_unit<T: Real>(v: &[T]) -> Result<Vec<T>> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut u = normalized(v).ok_or(Error::ZeroVector)?;
    canonicalize_sign(&mut u);
    Ok(u)
}

impl<T: Real> ProjPoint<T> {
    pub fn new(v: &[T]) -> Result<Self> {
        Ok(Self { vec: canonical_unit(v)? })
    }

    /// The coordinate line `[e_i]` of `R^d`.
    pub fn basis(d: usize, i: usize) -> Self {
        let mut v = vec![T::zero(); d];
        v[i] = T::one();
        Self { vec: v }
    }

    #[inline]
    pub fn vec(&self) -> &[T] {
        &self.vec
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.vec.len()
    }
}

impl<T: Real> ProjHyperplane<T> {
    /// Hyperplane `{x : <normal, x> = 0}`.
    pub fn from_normal(normal: &[T]) -> Result<Self> {
        Ok(Self { normal: canonical_unit(normal)? })
    }

    #[inline]
    pub fn normal(&self) -> &[T] {
        &self.normal
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// Whether `x` lies in the hyperplane up to `tol` in the sine metric.
    pub fn contains(&self, x: &ProjPoint<T>, tol: T) -> bool {
        delta_point_hyperplane(x, self) <= tol
    }
}

/// Sine of the angle between two lines; symmetric, valued in `[0, 1]`.
pub fn delta_points<T: Real>(x: &ProjPoint<T>, y: &ProjPoint<T>) -> T {
    sine_between(&x.vec, &y.vec)
}

/// `δ([x], H) = |<normal, x>|` for the unit representatives.
pub fn delta_point_hyperplane<T: Real>(x: &ProjPoint<T>, h: &ProjHyperplane<T>) -> T {
    dot(&x.vec, &h.normal).abs().min(T::one())
}

/// Sine metric between the dual points `[f]`, `[f']` of two hyperplanes.
pub fn delta_hyperplanes<T: Real>(h: &ProjHyperplane<T>, h2: &ProjHyperplane<T>) -> T {
    sine_between(&h.normal, &h2.normal)
}

/// Sine of the angle between two unit vectors, from the 2x2 minors so that
/// nearby lines keep full relative precision.
pub(crate) fn sine_between<T: Real>(v: &[T], w: &[T]) -> T {
    wedge2_norm(v, w).min(T::one())
}

/// `g · [v] = [g v]`.
pub fn projective_action<T: Real>(g: &SquareMatrix<T>, x: &ProjPoint<T>) -> ProjPoint<T> {
    let gv = g.mul_vec(&x.vec);
    ProjPoint::new(&gv).expect("invertible matrix maps a nonzero vector to a nonzero vector")
}

/// Action on hyperplanes through `(g f)(x) = f(g^{-1} x)`: the normal maps
/// to `g^{-T} normal`.
pub fn dual_action<T: Real>(g: &SquareMatrix<T>, h: &ProjHyperplane<T>) -> ProjHyperplane<T> {
    let ginv = g.inverse();
    let n = ginv.dense().transpose_mul_vec(&h.normal);
    ProjHyperplane::from_normal(&n).expect("invertible matrix maps a nonzero vector to a nonzero vector")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_sign_and_norm() {
        let p = ProjPoint::new(&[0.0, -3.0, 4.0]).unwrap();
        assert_eq!(p.vec(), &[0.0, 0.6, -0.8]);
        assert_eq!(ProjPoint::<f64>::new(&[0.0, 0.0]), Err(Error::ZeroVector));
    }

    #[test]
    fn sine_metric_examples() {
        let e1 = ProjPoint::<f64>::basis(2, 0);
        let e2 = ProjPoint::<f64>::basis(2, 1);
        let diag = ProjPoint::new(&[1.0, 1.0]).unwrap();
        assert_eq!(delta_points(&e1, &e2), 1.0);
        assert_eq!(delta_points(&e1, &e1), 0.0);
        assert!((delta_points(&e1, &diag) - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn point_hyperplane_examples() {
        let h = ProjHyperplane::from_normal(&[1.0, 0.0]).unwrap();
        let e1 = ProjPoint::<f64>::basis(2, 0);
        let e2 = ProjPoint::<f64>::basis(2, 1);
        let diag = ProjPoint::new(&[1.0, 1.0]).unwrap();
        assert_eq!(delta_point_hyperplane(&e1, &h), 1.0);
        assert_eq!(delta_point_hyperplane(&e2, &h), 0.0);
        assert!((delta_point_hyperplane(&diag, &h) - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn hyperplane_metric_examples() {
        let h1 = ProjHyperplane::from_normal(&[1.0, 0.0, 0.0]).unwrap();
        let h2 = ProjHyperplane::from_normal(&[0.0, -1.0, 0.0]).unwrap();
        assert_eq!(delta_hyperplanes(&h1, &h1), 0.0);
        assert_eq!(delta_hyperplanes(&h1, &h2), 1.0);
    }

    #[test]
    fn actions_on_invariant_objects() {
        let g = SquareMatrix::<f64>::diagonal(&[2.0, 1.0]);
        let e2 = ProjPoint::<f64>::basis(2, 1);
        assert_eq!(projective_action(&g, &e2), e2);
        let id = SquareMatrix::<f64>::identity(2);
        let x = ProjPoint::new(&[0.3, -0.7]).unwrap();
        assert_eq!(projective_action(&id, &x), x);
        let h = ProjHyperplane::from_normal(&[1.0, 0.0]).unwrap();
        assert_eq!(dual_action(&g, &h), h);
        assert_eq!(dual_action(&id, &h), h);
    }
}
