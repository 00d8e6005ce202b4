//! The driving probability measure `μ` on `GL_d(R)`: finite-support atoms
//! or parametric samplers, moment functionals, transpose and wedge
//! pushforwards, and the built-in ensembles.
//!
//! Algebraic hypotheses (strong irreducibility, proximality, Zariski
//! density) are declared by the user through [`MeasureFlags`]; nothing here
//! tries to decide them.

mod ensembles;
mod spec;
mod weight;

pub use ensembles::{gaussian_sl_measure, notconv_atoms, notconv_measure, positive_pair_measure, Ensemble};
pub use spec::{AtomSpec, EnsembleSpec, MeasureSpec};
pub use weight::Weight;

use std::borrow::Cow;

use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{kak, wedge_power, SquareMatrix};
use crate::rng::RngStream;
use crate::scalar::Real;

/// User-asserted algebraic properties of the generated semigroup `Γ_μ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct MeasureFlags {
    pub strongly_irreducible: bool,
    pub proximal: bool,
    /// `Γ_μ` has unbounded image in `PGL(V)`.
    pub unbounded_image: bool,
    pub zariski_dense: bool,
    pub proximality_index_hint: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom<T> {
    pub matrix: SquareMatrix<T>,
    pub weight: Weight,
}

/// Pushforward applied to every draw of a sampler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pushforward {
    Transpose,
    Wedge(usize),
}

#[derive(Debug, Clone)]
enum Kind<T> {
    Finite { atoms: Vec<Atom<T>>, alias: WeightedAliasIndex<f64> },
    Sampler { ensemble: Ensemble, pushforwards: Vec<Pushforward> },
}

/// Probability measure on `GL_d(R)`; immutable and shareable.
#[derive(Debug, Clone)]
pub struct MatrixMeasure<T> {
    dim: usize,
    kind: Kind<T>,
    flags: MeasureFlags,
}

/// One draw from a measure; `atom` is the atom index for finite measures.
pub struct Draw<'a, T: Clone> {
    pub atom: Option<usize>,
    pub matrix: Cow<'a, SquareMatrix<T>>,
}

impl<T: Real> MatrixMeasure<T> {
    /// Finite-support measure. Weights must be positive and sum to one:
    /// exactly when all are rational, within `1e-12` otherwise.
    pub fn finite(atoms: Vec<Atom<T>>, flags: MeasureFlags) -> Result<Self> {
        let first = atoms.first().ok_or(Error::EmptyInput)?;
        let dim = first.matrix.dim();
        for a in &atoms {
            if a.matrix.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: a.matrix.dim() });
            }
            if !a.weight.is_positive() {
                return Err(Error::Domain(format!("atom weight {} is not positive", a.weight)));
            }
        }
        let weights: Vec<Weight> = atoms.iter().map(|a| a.weight).collect();
        match Weight::exact_sum(&weights) {
            Some(s) if s != num_rational::Ratio::from_integer(1) => {
                return Err(Error::Domain(format!("exact weights sum to {s}, not 1")));
            }
            Some(_) => {}
            None => {
                let s: f64 = weights.iter().map(|w| w.to_f64()).sum();
                if (s - 1.0).abs() > 1e-12 {
                    return Err(Error::Domain(format!("weights sum to {s}, not 1")));
                }
            }
        }
        check_hint(flags, dim)?;
        let alias = WeightedAliasIndex::new(weights.iter().map(|w| w.to_f64()).collect())
            .map_err(|e| Error::Domain(format!("alias table: {e}")))?;
        Ok(Self { dim, kind: Kind::Finite { atoms, alias }, flags })
    }

    /// Uniform measure on the given matrices, with exact weights `1/k`.
    pub fn uniform(matrices: Vec<SquareMatrix<T>>, flags: MeasureFlags) -> Result<Self> {
        let k = matrices.len() as u64;
        let atoms = matrices
            .into_iter()
            .map(|m| Atom { matrix: m, weight: Weight::Exact(num_rational::Ratio::new(1, k.max(1))) })
            .collect();
        Self::finite(atoms, flags)
    }

    pub fn point_mass(g: SquareMatrix<T>, flags: MeasureFlags) -> Result<Self> {
        Self::uniform(vec![g], flags)
    }

    pub fn sampler(ensemble: Ensemble, flags: MeasureFlags) -> Result<Self> {
        let dim = ensemble.dim();
        check_hint(flags, dim)?;
        Ok(Self { dim, kind: Kind::Sampler { ensemble, pushforwards: Vec::new() }, flags })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn flags(&self) -> MeasureFlags {
        self.flags
    }

    pub fn with_flags(mut self, flags: MeasureFlags) -> Result<Self> {
        check_hint(flags, self.dim)?;
        self.flags = flags;
        Ok(self)
    }

    /// Atoms of a finite measure, `None` for samplers.
    pub fn atoms(&self) -> Option<&[Atom<T>]> {
        match &self.kind {
            Kind::Finite { atoms, .. } => Some(atoms),
            Kind::Sampler { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, Kind::Finite { .. })
    }

    /// Whether every matrix in the support has `|det| = 1` (within `1e-12`).
    pub fn is_unimodular(&self) -> bool {
        match &self.kind {
            Kind::Finite { atoms, .. } => {
                atoms.iter().all(|a| (a.matrix.determinant().abs().as_f64() - 1.0).abs() <= 1e-12)
            }
            Kind::Sampler { ensemble, .. } => ensemble.is_unimodular(),
        }
    }

    pub fn sample<'a, R: Rng + ?Sized>(&'a self, rng: &mut R) -> Draw<'a, T> {
        match &self.kind {
            Kind::Finite { atoms, alias } => {
                let i = alias.sample(rng);
                Draw { atom: Some(i), matrix: Cow::Borrowed(&atoms[i].matrix) }
            }
            Kind::Sampler { ensemble, pushforwards } => {
                let mut g = ensemble.sample(rng);
                for p in pushforwards {
                    g = apply_pushforward(&g, *p);
                }
                Draw { atom: None, matrix: Cow::Owned(g) }
            }
        }
    }

    /// Exact `∫ l(g)^i dμ(g)` for finite measures.
    pub fn moment(&self, order: u32) -> Result<MomentReport> {
        if order == 0 {
            return Err(Error::Domain("moment order must be at least 1".into()));
        }
        let atoms = self.atoms().ok_or(Error::UnsupportedForSampler("exact moment"))?;
        let mut value = 0.0;
        for a in atoms {
            value += a.weight.to_f64() * moment_kernel(&a.matrix)?.as_f64().powi(order as i32);
        }
        Ok(MomentReport { order, value, std_error: None })
    }

    /// Monte Carlo estimate of the moment (any kind), with standard error.
    pub fn moment_estimate(&self, order: u32, draws: usize, stream: RngStream) -> Result<MomentReport> {
        if order == 0 || draws < 2 {
            return Err(Error::Domain("moment estimate needs order >= 1 and at least 2 draws".into()));
        }
        let mut rng = stream.rng();
        let mut xs = Vec::with_capacity(draws);
        for _ in 0..draws {
            let g = self.sample(&mut rng);
            xs.push(moment_kernel(&g.matrix)?.as_f64().powi(order as i32));
        }
        let n = draws as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        Ok(MomentReport { order, value: mean, std_error: Some((var / n).sqrt()) })
    }

    /// Pushforward `μ^t` under `g ↦ g^T`. Flags carry over.
    pub fn transpose_measure(&self) -> Self {
        self.map(Pushforward::Transpose)
    }

    /// Pushforward under `g ↦ ∧^p g`, a measure on `GL_{C(d,p)}(R)`. The
    /// proximality hint is dropped; other flags carry over unchanged and
    /// remain the user's responsibility.
    pub fn wedge_measure(&self, p: usize) -> Result<Self> {
        if p == 0 || p > self.dim {
            return Err(Error::Domain(format!("wedge degree {p} outside [1, {}]", self.dim)));
        }
        if p == 1 {
            return Ok(self.clone());
        }
        let mut out = self.map(Pushforward::Wedge(p));
        out.flags.proximality_index_hint = None;
        Ok(out)
    }

    fn map(&self, p: Pushforward) -> Self {
        let dim = match p {
            Pushforward::Transpose => self.dim,
            Pushforward::Wedge(k) => crate::geometry::binomial(self.dim, k),
        };
        let kind = match &self.kind {
            Kind::Finite { atoms, alias } => Kind::Finite {
                atoms: atoms
                    .iter()
                    .map(|a| Atom { matrix: apply_pushforward(&a.matrix, p), weight: a.weight })
                    .collect(),
                alias: alias.clone(),
            },
            Kind::Sampler { ensemble, pushforwards } => {
                let mut pf = pushforwards.clone();
                pf.push(p);
                Kind::Sampler { ensemble: ensemble.clone(), pushforwards: pf }
            }
        };
        Self { dim, kind, flags: self.flags }
    }

    /// Short human-readable description.
    pub fn describe(&self) -> String {
        match &self.kind {
            Kind::Finite { atoms, .. } => format!("finite measure on GL_{}(R) with {} atoms", self.dim, atoms.len()),
            Kind::Sampler { ensemble, pushforwards } => format!("{ensemble:?} sampler, pushforwards {pushforwards:?}"),
        }
    }
}

fn apply_pushforward<T: Real>(g: &SquareMatrix<T>, p: Pushforward) -> SquareMatrix<T> {
    match p {
        Pushforward::Transpose => g.transpose(),
        Pushforward::Wedge(k) => wedge_power(g, k).expect("wedge degree validated"),
    }
}

fn check_hint(flags: MeasureFlags, dim: usize) -> Result<()> {
    match flags.proximality_index_hint {
        Some(p) if p == 0 || p > dim => Err(Error::Domain(format!("proximality index hint {p} outside [1, {dim}]"))),
        _ => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub order: u32,
    pub value: f64,
    /// Present for Monte Carlo estimates.
    pub std_error: Option<f64>,
}

/// `l(g) = max(ln⁺|g|, ln⁺|g^{-1}|)` with operator norms.
pub fn moment_kernel<T: Real>(g: &SquareMatrix<T>) -> Result<T> {
    let a = kak(g)?.a;
    let top = a[0].ln().max(T::zero());
    let inv = (-a[a.len() - 1].ln()).max(T::zero());
    Ok(top.max(inv))
}
