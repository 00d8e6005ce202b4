//! Simulation of the left walk `L_n = X_n ⋯ X_1` and the right walk
//! `R_n = X_1 ⋯ X_n` with exact log-scale renormalization, checkpointed
//! observables and deterministic parallel Monte Carlo.

mod state;

pub use state::{init_state, PreparedStep, ScaledProduct, Side, WalkSample, WalkState};

use std::borrow::Cow;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ProjPoint;
use crate::linalg::normalized;
use crate::measure::{MatrixMeasure, MeasureFlags};
use crate::rng::RngStream;
use crate::scalar::Real;

/// Length, checkpoint schedule and side of every trial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub n: usize,
    /// Sorted, distinct, within `[1, n]`.
    pub checkpoints: Vec<usize>,
    #[serde(default)]
    pub side: Side,
    #[serde(default = "default_true")]
    pub full_spectrum: bool,
}

fn default_true() -> bool {
    true
}

impl WalkConfig {
    pub fn new(n: usize, checkpoints: Vec<usize>, side: Side) -> Self {
        Self { n, checkpoints, side, full_spectrum: true }
    }

    /// Single checkpoint at `n`.
    pub fn final_only(n: usize, side: Side) -> Self {
        Self::new(n, if n == 0 { vec![] } else { vec![n] }, side)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.checkpoints.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Domain("checkpoints must be strictly increasing".into()));
        }
        if let (Some(&first), Some(&last)) = (self.checkpoints.first(), self.checkpoints.last()) {
            if first == 0 || last > self.n {
                return Err(Error::Domain(format!("checkpoints must lie in [1, {}]", self.n)));
            }
        }
        Ok(())
    }
}

/// Per-trial, per-checkpoint samples with the configuration and seed
/// lineage that produced them. Trial `t` used stream `(master_seed, t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet<T> {
    pub config: WalkConfig,
    pub trials: usize,
    pub master_seed: u64,
    /// Flags of the measure that was sampled.
    pub flags: MeasureFlags,
    pub samples: Vec<Vec<WalkSample<T>>>,
}

impl<T: Real> SampleSet<T> {
    /// Index of checkpoint `n` in the schedule.
    pub fn checkpoint_index(&self, n: usize) -> Option<usize> {
        self.config.checkpoints.iter().position(|&c| c == n)
    }

    /// All trials' samples at checkpoint `n`.
    pub fn at(&self, n: usize) -> Result<Vec<&WalkSample<T>>> {
        let k = self
            .checkpoint_index(n)
            .ok_or_else(|| Error::Domain(format!("{n} is not a checkpoint")))?;
        Ok(self.samples.iter().map(|s| &s[k]).collect())
    }

    /// Samples at the last checkpoint.
    pub fn final_samples(&self) -> Result<Vec<&WalkSample<T>>> {
        let n = *self.config.checkpoints.last().ok_or(Error::EmptyInput)?;
        self.at(n)
    }

    pub fn final_n(&self) -> Option<usize> {
        self.config.checkpoints.last().copied()
    }
}

/// Draws increments from `μ`, with exterior powers cached per atom.
pub struct Stepper<'a, T: Real> {
    measure: &'a MatrixMeasure<T>,
    atoms: Option<Vec<PreparedStep<T>>>,
    full_spectrum: bool,
}

impl<'a, T: Real> Stepper<'a, T> {
    pub fn new(measure: &'a MatrixMeasure<T>, full_spectrum: bool) -> Self {
        let atoms = measure
            .atoms()
            .map(|a| a.iter().map(|a| PreparedStep::new(&a.matrix, full_spectrum)).collect());
        Self { measure, atoms, full_spectrum }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> (Option<usize>, Cow<'_, PreparedStep<T>>) {
        let d = self.measure.sample(rng);
        match (&self.atoms, d.atom) {
            (Some(prep), Some(i)) => (Some(i), Cow::Borrowed(&prep[i])),
            _ => (d.atom, Cow::Owned(PreparedStep::new(&d.matrix, self.full_spectrum))),
        }
    }
}

/// One trial: advance the walk `n` steps with draws from `μ` in order and
/// observe at each checkpoint.
pub fn run_trial<T: Real>(
    mu: &MatrixMeasure<T>,
    config: &WalkConfig,
    stream: RngStream,
) -> Result<Vec<WalkSample<T>>> {
    config.validate()?;
    let stepper = Stepper::new(mu, config.full_spectrum);
    run_trial_with(&stepper, mu.dim(), config, stream)
}

fn run_trial_with<T: Real>(
    stepper: &Stepper<'_, T>,
    dim: usize,
    config: &WalkConfig,
    stream: RngStream,
) -> Result<Vec<WalkSample<T>>> {
    let mut rng = stream.rng();
    let mut state = WalkState::new(dim, config.side, config.full_spectrum);
    let mut out = Vec::with_capacity(config.checkpoints.len());
    let mut next = config.checkpoints.iter().peekable();
    let last = config.checkpoints.last().copied().unwrap_or(0);
    for _ in 0..last {
        let (_, x) = stepper.draw(&mut rng);
        state.step_prepared(&x)?;
        if next.peek() == Some(&&state.n()) {
            out.push(state.observe()?);
            next.next();
        }
    }
    Ok(out)
}

/// Runs `f` on a pool with `threads` workers (`None`: rayon's default).
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Independent trials `0..trials`, trial `t` on stream `(master_seed, t)`;
/// results are ordered by trial index and bit-identical for any `threads`.
pub fn run_monte_carlo<T: Real>(
    mu: &MatrixMeasure<T>,
    config: &WalkConfig,
    trials: usize,
    master_seed: u64,
    threads: Option<usize>,
) -> Result<SampleSet<T>> {
    if trials == 0 {
        return Err(Error::Domain("at least one trial is required".into()));
    }
    config.validate()?;
    let stepper = Stepper::new(mu, config.full_spectrum);
    let dim = mu.dim();
    let samples = with_threads(threads, || {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                run_trial_with(&stepper, dim, config, RngStream::new(master_seed, t as u64))
                    .map_err(|e| Error::Trial { index: t, source: Box::new(e) })
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(SampleSet { config: config.clone(), trials, master_seed, flags: mu.flags(), samples })
}

/// `R_n · x_0 = X_1 ⋯ X_n · x_0`, an approximate draw from the stationary
/// measure `ν` when `μ` is strongly irreducible and proximal.
pub fn stationary_sample<T: Real>(
    mu: &MatrixMeasure<T>,
    x0: &ProjPoint<T>,
    n: usize,
    stream: RngStream,
) -> Result<ProjPoint<T>> {
    if x0.dim() != mu.dim() {
        return Err(Error::DimensionMismatch { expected: mu.dim(), got: x0.dim() });
    }
    let mut rng = stream.rng();
    let draws: Vec<_> = (0..n).map(|_| mu.sample(&mut rng).matrix.into_owned()).collect();
    let mut v = x0.vec().to_vec();
    for g in draws.iter().rev() {
        v = normalized(&g.mul_vec(&v)).ok_or(Error::ZeroVector)?;
    }
    ProjPoint::new(&v)
}

/// `count` stationary draws on streams `(stream.master, 0..count)`.
pub fn stationary_points<T: Real>(
    mu: &MatrixMeasure<T>,
    x0: &ProjPoint<T>,
    n: usize,
    count: usize,
    stream: RngStream,
    threads: Option<usize>,
) -> Result<Vec<ProjPoint<T>>> {
    with_threads(threads, || {
        (0..count)
            .into_par_iter()
            .map(|i| stationary_sample(mu, x0, n, stream.at(i as u64)))
            .collect::<Result<Vec<_>>>()
    })?
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::notconv_measure;

    #[test]
    fn empty_walk() {
        let mu = notconv_measure::<f64>(2.0, 0.5).unwrap();
        let out = run_trial(&mu, &WalkConfig::final_only(0, Side::Left), RngStream::new(1, 0)).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn bad_checkpoints() {
        let mu = notconv_measure::<f64>(2.0, 0.5).unwrap();
        for cps in [vec![0, 2], vec![3, 2], vec![5, 11]] {
            let cfg = WalkConfig::new(10, cps, Side::Left);
            assert!(run_trial(&mu, &cfg, RngStream::new(1, 0)).is_err());
        }
    }

    #[test]
    fn odd_times_have_unit_spectral_radius() {
        let mu = notconv_measure::<f64>(2.0, 0.5).unwrap();
        let cfg = WalkConfig::new(41, (1..=41).step_by(2).collect(), Side::Left);
        for t in 0..20 {
            for s in run_trial(&mu, &cfg, RngStream::new(5, t)).unwrap() {
                assert!(s.log_specrad.abs() < 1e-9, "n={} {}", s.n, s.log_specrad);
            }
        }
    }
}
