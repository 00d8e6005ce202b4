//! JSON measure descriptions consumed by the command-line runner:
//!
//! ```json
//! { "dim": 2, "atoms": [ {"matrix": [[2,1],[1,1]], "weight": "1/2"}, ... ], "flags": {...} }
//! { "ensemble": "notconv", "lambda": 2.0, "theta": 0.5 }
//! ```

use serde::{Deserialize, Serialize};

use super::{gaussian_sl_measure, notconv_measure, positive_pair_measure, Atom, MatrixMeasure, MeasureFlags, Weight};
use crate::error::{Error, Result};
use crate::geometry::SquareMatrix;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasureSpec {
    Atoms {
        dim: usize,
        atoms: Vec<AtomSpec>,
        #[serde(default)]
        flags: MeasureFlags,
    },
    Ensemble(EnsembleSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub matrix: Vec<Vec<f64>>,
    pub weight: Weight,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "ensemble", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnsembleSpec {
    Notconv { lambda: f64, theta: f64 },
    PositivePair,
    GaussianSl { dim: usize },
}

impl Default for MeasureSpec {
    fn default() -> Self {
        MeasureSpec::Ensemble(EnsembleSpec::PositivePair)
    }
}

impl MeasureSpec {
    pub fn build<T: Real>(&self) -> Result<MatrixMeasure<T>> {
        match self {
            MeasureSpec::Atoms { dim, atoms, flags } => {
                let atoms = atoms
                    .iter()
                    .map(|a| {
                        let rows = a.matrix.iter().map(|r| r.iter().map(|&x| T::lit(x)).collect()).collect();
                        let m = SquareMatrix::from_rows(rows)?;
                        if m.dim() != *dim {
                            return Err(Error::DimensionMismatch { expected: *dim, got: m.dim() });
                        }
                        Ok(Atom { matrix: m, weight: a.weight })
                    })
                    .collect::<Result<Vec<_>>>()?;
                MatrixMeasure::finite(atoms, *flags)
            }
            MeasureSpec::Ensemble(EnsembleSpec::Notconv { lambda, theta }) => notconv_measure(*lambda, *theta),
            MeasureSpec::Ensemble(EnsembleSpec::PositivePair) => Ok(positive_pair_measure()),
            MeasureSpec::Ensemble(EnsembleSpec::GaussianSl { dim }) => gaussian_sl_measure(*dim),
        }
    }
}
