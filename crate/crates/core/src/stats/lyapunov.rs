use serde::{Deserialize, Serialize};

use super::mean_std;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::walk::SampleSet;

pub const MIN_LYAPUNOV_TRIALS: usize = 30;

/// Per-step exponents `λ̂_i = mean_t cartan_i(L_n)/n` at the final checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LyapunovEstimate {
    pub lambdas: Vec<f64>,
    pub std_errors: Vec<f64>,
    /// Standard error of `λ̂_i - λ̂_{i+1}` from the per-trial differences.
    pub gap_std_errors: Vec<f64>,
    pub n_used: usize,
    pub trials_used: usize,
}

impl LyapunovEstimate {
    /// `(λ̂_i - λ̂_{i+1}, its standard error)`, zero-based `i`.
    pub fn gap(&self, i: usize) -> Option<(f64, f64)> {
        Some((self.lambdas.get(i)? - self.lambdas.get(i + 1)?, *self.gap_std_errors.get(i)?))
    }

    /// Sum of the exponents.
    pub fn sum(&self) -> f64 {
        self.lambdas.iter().sum()
    }

    /// `λ̂_i` is non-increasing up to `slack` standard errors.
    pub fn is_ordered(&self, slack: f64) -> bool {
        (0..self.lambdas.len().saturating_sub(1)).all(|i| {
            self.lambdas[i] + slack * (self.std_errors[i] + self.std_errors[i + 1]) >= self.lambdas[i + 1]
        })
    }
}

pub fn lyapunov_estimate<T: Real>(samples: &SampleSet<T>) -> Result<LyapunovEstimate> {
    let fin = samples.final_samples()?;
    if fin.len() < MIN_LYAPUNOV_TRIALS {
        return Err(Error::InsufficientSamples { needed: MIN_LYAPUNOV_TRIALS, have: fin.len() });
    }
    let n = samples.final_n().ok_or(Error::EmptyInput)?;
    let d = fin[0].cartan.values().len();
    let per: Vec<Vec<f64>> =
        fin.iter().map(|s| s.cartan.values().iter().map(|c| c.as_f64() / n as f64).collect()).collect();
    let sqrt_t = (fin.len() as f64).sqrt();
    let col = |i: usize| per.iter().map(|r| r[i]).collect::<Vec<_>>();
    let (mut lambdas, mut std_errors) = (Vec::with_capacity(d), Vec::with_capacity(d));
    for i in 0..d {
        let (m, s) = mean_std(&col(i));
        lambdas.push(m);
        std_errors.push(s / sqrt_t);
    }
    let gap_std_errors = (0..d.saturating_sub(1))
        .map(|i| mean_std(&per.iter().map(|r| r[i] - r[i + 1]).collect::<Vec<_>>()).1 / sqrt_t)
        .collect();
    Ok(LyapunovEstimate { lambdas, std_errors, gap_std_errors, n_used: n, trials_used: fin.len() })
}
