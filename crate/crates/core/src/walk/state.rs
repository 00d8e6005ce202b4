use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    binomial, compound, dense_eigen_moduli, CartanVector, JordanVector, ProjHyperplane, ProjPoint, SquareMatrix,
    DEGENERACY_RATIO,
};
use crate::linalg::{dot, norm, svd, wedge2_coords, wedge2_norm, Dense};
use crate::scalar::Real;

/// Which end of the product the new increment multiplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `L_n = X_n ⋯ X_1`: the new increment multiplies on the left.
    #[default]
    Left,
    /// `R_n = X_1 ⋯ X_n`: the new increment multiplies on the right.
    Right,
}

/// `exp(log_scale) · rep`, with `rep` rescaled to unit Frobenius norm after
/// every update and the logs of the exact divisors accumulated.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledProduct<T> {
    pub rep: Dense<T>,
    pub log_scale: T,
}

impl<T: Real> ScaledProduct<T> {
    pub fn identity(n: usize) -> Self {
        Self { rep: Dense::identity(n), log_scale: T::zero() }
    }

    fn apply(&mut self, x: &Dense<T>, side: Side, step: usize) -> Result<()> {
        let next = match side {
            Side::Left => x.matmul(&self.rep),
            Side::Right => self.rep.matmul(x),
        };
        if !next.all_finite() {
            return Err(Error::Overflow { step });
        }
        let f = next.frobenius_norm();
        if !(f > T::zero() && f.is_finite()) {
            return Err(Error::Overflow { step });
        }
        self.rep = next.scaled(T::one() / f);
        self.log_scale += f.ln();
        Ok(())
    }

    /// The true product `exp(log_scale) · rep`; overflows for long walks.
    pub fn materialize(&self) -> Dense<T> {
        self.rep.scaled(self.log_scale.exp())
    }
}

/// An increment with its exterior powers and `ln|det|` precomputed.
#[derive(Debug, Clone)]
pub struct PreparedStep<T> {
    pub matrix: Dense<T>,
    pub wedges: Vec<Dense<T>>,
    pub log_abs_det: T,
}

impl<T: Real> PreparedStep<T> {
    pub fn new(x: &SquareMatrix<T>, full_spectrum: bool) -> Self {
        let d = x.dim();
        let wedges = if full_spectrum && d >= 3 { (2..d).map(|p| compound(x.dense(), p)).collect() } else { Vec::new() };
        Self { matrix: x.dense().clone(), wedges, log_abs_det: x.determinant().abs().ln() }
    }
}

/// Running product of a left or right random walk.
///
/// With `full_spectrum` the exterior powers `∧^p`, `2 <= p <= d-1`, are
/// carried alongside as independently renormalized products and `ln|det|`
/// is accumulated exactly, so that the lower Cartan and Jordan entries stay
/// accurate after the main product has collapsed to numerical rank one.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState<T> {
    side: Side,
    n: usize,
    main: ScaledProduct<T>,
    wedges: Vec<ScaledProduct<T>>,
    log_abs_det: T,
    full_spectrum: bool,
}

/// Observables of `L_n` (or `R_n`) at one checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkSample<T> {
    pub n: usize,
    /// `ln |L_n|` (operator norm).
    pub log_norm: T,
    /// `ln ρ(L_n)`.
    pub log_specrad: T,
    pub cartan: CartanVector<T>,
    pub jordan: JordanVector<T>,
    /// `δ(v_n^+, H_n^-)`.
    pub delta_n: T,
    pub v_plus: ProjPoint<T>,
    pub h_minus: ProjHyperplane<T>,
    pub degenerate: bool,
}

/// `init_state(dim, side)` with the full spectrum tracked.
pub fn init_state<T: Real>(dim: usize, side: Side) -> WalkState<T> {
    WalkState::new(dim, side, true)
}

impl<T: Real> WalkState<T> {
    pub fn new(dim: usize, side: Side, full_spectrum: bool) -> Self {
        assert!(dim >= 1, "walk dimension must be positive");
        let wedges = if full_spectrum && dim >= 3 {
            (2..dim).map(|p| ScaledProduct::identity(binomial(dim, p))).collect()
        } else {
            Vec::new()
        };
        Self { side, n: 0, main: ScaledProduct::identity(dim), wedges, log_abs_det: T::zero(), full_spectrum }
    }

    #[inline]
    pub fn side(&self) -> Side {
        self.side
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.main.rep.dim()
    }

    #[inline]
    pub fn product(&self) -> &ScaledProduct<T> {
        &self.main
    }

    #[inline]
    pub fn rep(&self) -> &Dense<T> {
        &self.main.rep
    }

    #[inline]
    pub fn log_scale(&self) -> T {
        self.main.log_scale
    }

    #[inline]
    pub fn log_abs_det(&self) -> T {
        self.log_abs_det
    }

    pub fn full_spectrum(&self) -> bool {
        self.full_spectrum
    }

    pub fn step(&mut self, x: &SquareMatrix<T>) -> Result<()> {
        self.step_prepared(&PreparedStep::new(x, self.full_spectrum))
    }

    pub fn step_prepared(&mut self, x: &PreparedStep<T>) -> Result<()> {
        if x.matrix.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.matrix.dim() });
        }
        let step = self.n + 1;
        self.main.apply(&x.matrix, self.side, step)?;
        if !self.wedges.is_empty() {
            if x.wedges.len() != self.wedges.len() {
                return Err(Error::Domain("prepared step lacks exterior powers".into()));
            }
            for (w, xw) in self.wedges.iter_mut().zip(&x.wedges) {
                w.apply(xw, self.side, step)?;
            }
        }
        self.log_abs_det += x.log_abs_det;
        self.n = step;
        Ok(())
    }

    /// `ln |P v|` for the true product `P`.
    pub fn log_apply_norm(&self, v: &[T]) -> T {
        self.main.log_scale + norm(&self.main.rep.mul_vec(v)).ln()
    }

    /// Direction of `P v`.
    pub fn apply_direction(&self, v: &[T]) -> Result<ProjPoint<T>> {
        ProjPoint::new(&self.main.rep.mul_vec(v))
    }

    /// `ln |∧^2 P (v ∧ w)|`, computed from the tracked exterior square (or
    /// the determinant when `d = 2`) so it stays accurate when `P` is
    /// numerically rank one.
    pub fn log_wedge2_apply(&self, v: &[T], w: &[T]) -> Result<T> {
        match self.dim() {
            1 => Err(Error::Domain("no exterior square in dimension 1".into())),
            2 => Ok(self.log_abs_det + wedge2_norm(v, w).ln()),
            _ => {
                let w2 = self.wedges.first().ok_or(Error::Domain("exterior powers not tracked".into()))?;
                let coords = wedge2_coords(v, w);
                Ok(w2.log_scale + norm(&w2.rep.mul_vec(&coords)).ln())
            }
        }
    }

    /// `ln δ(P·[v], P·[w]) = ln|∧²P(v∧w)| - ln|Pv| - ln|Pw|`.
    pub fn log_delta_images(&self, v: &[T], w: &[T]) -> Result<T> {
        let lw = self.log_wedge2_apply(v, w)?;
        Ok((lw - self.log_apply_norm(v) - self.log_apply_norm(w)).min(T::zero()))
    }

    pub fn observe(&self) -> Result<WalkSample<T>> {
        let d = self.dim();
        let ls = self.main.log_scale;
        let dec = svd(&self.main.rep);
        let moduli = dense_eigen_moduli(&self.main.rep)?;
        let log_norm = ls + dec.s[0].ln();
        let log_specrad = ls + moduli[0].ln();

        let (cartan, jordan) = if d == 1 {
            (vec![log_norm], vec![log_specrad])
        } else if self.full_spectrum {
            let mut cum_c = vec![T::zero(), log_norm];
            let mut cum_j = vec![T::zero(), log_specrad];
            for w in &self.wedges {
                let s = svd(&w.rep).s[0];
                let r = dense_eigen_moduli(&w.rep)?[0];
                cum_c.push(w.log_scale + s.ln());
                cum_j.push(w.log_scale + r.ln());
            }
            cum_c.push(self.log_abs_det);
            cum_j.push(self.log_abs_det);
            let diff = |c: &[T]| c.windows(2).map(|w| w[1] - w[0]).collect::<Vec<_>>();
            (diff(&cum_c), diff(&cum_j))
        } else {
            (dec.s.iter().map(|&s| ls + s.ln()).collect(), moduli.iter().map(|&m| ls + m.ln()).collect())
        };

        let u1 = dec.u.column(0);
        let h = dec.vt.row(0).to_vec();
        let delta_n = dot(&u1, &h).abs().min(T::one());
        let degenerate = d >= 2 && (cartan[1] - cartan[0]).exp() > T::lit(DEGENERACY_RATIO);
        Ok(WalkSample {
            n: self.n,
            log_norm,
            log_specrad,
            cartan: CartanVector(cartan),
            jordan: JordanVector(jordan),
            delta_n,
            v_plus: ProjPoint::new(&u1)?,
            h_minus: ProjHyperplane::from_normal(&h)?,
            degenerate,
        })
    }
}
