use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{Atom, MatrixMeasure, MeasureFlags, Weight};
use crate::error::{Error, Result};
use crate::geometry::SquareMatrix;
use crate::linalg::Dense;
use crate::scalar::Real;

/// Parametric samplers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Ensemble {
    /// i.i.d. standard Gaussian entries, rescaled by `|det|^{-1/d}` onto
    /// `det = ±1`. Orthogonally invariant, all polynomial moments finite.
    GaussianSl { dim: usize },
}

impl Ensemble {
    pub fn dim(&self) -> usize {
        match self {
            Ensemble::GaussianSl { dim } => *dim,
        }
    }

    pub fn is_unimodular(&self) -> bool {
        true
    }

    pub fn sample<T: Real, R: Rng + ?Sized>(&self, rng: &mut R) -> SquareMatrix<T> {
        match self {
            Ensemble::GaussianSl { dim } => loop {
                let d = *dim;
                let data: Vec<f64> = (0..d * d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
                let m = Dense::from_row_major(d, data);
                let det = m.determinant().abs();
                // probability zero, but never hand out a singular draw
                if !(det > 1e-300) {
                    continue;
                }
                let m = m.scaled(det.powf(-1.0 / d as f64));
                let cast = Dense::from_row_major(d, m.as_slice().iter().map(|&x| T::lit(x)).collect());
                if let Ok(g) = SquareMatrix::from_dense_unchecked(cast) {
                    return g;
                }
            },
        }
    }
}

/// Irreducible but not strongly irreducible example on `SL_2(R)`: atoms
/// `σ = [[0,-1],[1,0]]` with weight `1-θ` and `σ a`, `a = diag(λ, 1/λ)`, with
/// weight `θ`. The coordinate axes form an invariant finite union of lines.
pub fn notconv_measure<T: Real>(lambda: f64, theta: f64) -> Result<MatrixMeasure<T>> {
    if !(lambda > 1.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("lambda = {lambda} must exceed 1")));
    }
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!("theta = {theta} must lie in (0, 1)")));
    }
    let (sigma, sigma_a) = notconv_atoms::<T>(lambda);
    let flags = MeasureFlags {
        strongly_irreducible: false,
        proximal: true,
        unbounded_image: true,
        zariski_dense: false,
        proximality_index_hint: Some(1),
    };
    MatrixMeasure::finite(
        vec![
            Atom { matrix: sigma, weight: Weight::Approx(1.0 - theta) },
            Atom { matrix: sigma_a, weight: Weight::Approx(theta) },
        ],
        flags,
    )
}

/// `(σ, σ a)` for the counterexample with parameter `λ`.
pub fn notconv_atoms<T: Real>(lambda: f64) -> (SquareMatrix<T>, SquareMatrix<T>) {
    let l = T::lit(lambda);
    let (z, o) = (T::zero(), T::one());
    let sigma = SquareMatrix::from_rows(vec![vec![z, -o], vec![o, z]]).expect("rotation");
    let a = SquareMatrix::diagonal(&[l, o / l]);
    let sigma_a = sigma.matmul(&a);
    (sigma, sigma_a)
}

/// Uniform on `{[[2,1],[1,1]], [[1,1],[1,2]]}`: a strongly irreducible,
/// proximal, Zariski-dense ensemble in `SL_2(Z)`.
pub fn positive_pair_measure<T: Real>() -> MatrixMeasure<T> {
    let f = |rows: [[f64; 2]; 2]| {
        SquareMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| T::lit(x)).collect()).collect()).unwrap()
    };
    let flags = MeasureFlags {
        strongly_irreducible: true,
        proximal: true,
        unbounded_image: true,
        zariski_dense: true,
        proximality_index_hint: Some(1),
    };
    MatrixMeasure::uniform(vec![f([[2.0, 1.0], [1.0, 1.0]]), f([[1.0, 1.0], [1.0, 2.0]])], flags)
        .expect("valid atoms")
}

/// Gaussian ensemble rescaled onto `|det| = 1`, flagged strongly irreducible,
/// proximal and Zariski dense.
pub fn gaussian_sl_measure<T: Real>(dim: usize) -> Result<MatrixMeasure<T>> {
    if dim == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    let nontrivial = dim >= 2;
    MatrixMeasure::sampler(
        Ensemble::GaussianSl { dim },
        MeasureFlags {
            strongly_irreducible: nontrivial,
            proximal: true,
            unbounded_image: nontrivial,
            zariski_dense: nontrivial,
            proximality_index_hint: Some(1),
        },
    )
}
