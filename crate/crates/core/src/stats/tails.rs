use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::walk::{SampleSet, WalkSample};

/// 95% two-sided normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailKind {
    /// `ρ(L_n)/|L_n| <= ε`
    Ratio,
    /// `δ_n <= ε`
    Delta,
}

/// Empirical `P̂(· <= ε)` over a sorted grid, with Wilson 95% intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailCurve {
    pub kind: TailKind,
    pub epsilons: Vec<f64>,
    pub probs: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub n: usize,
    pub trials: usize,
}

impl TailCurve {
    pub fn half_widths(&self) -> Vec<f64> {
        self.lower.iter().zip(&self.upper).map(|(l, u)| 0.5 * (u - l)).collect()
    }

    pub fn is_monotone(&self) -> bool {
        self.probs.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn prob_at(&self, eps: f64) -> Option<f64> {
        self.epsilons.iter().position(|&e| e == eps).map(|i| self.probs[i])
    }
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: usize, n: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    let lo = if k == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if k == n { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

fn check_grid(eps: &[f64]) -> Result<()> {
    if eps.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !eps.iter().all(|e| *e > 0.0 && e.is_finite()) || !eps.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Domain("epsilon grid must be positive and strictly increasing".into()));
    }
    Ok(())
}

fn curve(kind: TailKind, logs: Vec<f64>, eps: &[f64], n: usize) -> Result<TailCurve> {
    check_grid(eps)?;
    let trials = logs.len();
    let mut sorted = logs;
    sorted.sort_by(f64::total_cmp);
    let (mut probs, mut lower, mut upper) = (vec![], vec![], vec![]);
    for &e in eps {
        let le = e.ln();
        let k = sorted.partition_point(|&x| x <= le);
        let (lo, hi) = wilson_interval(k, trials);
        probs.push(k as f64 / trials as f64);
        lower.push(lo);
        upper.push(hi);
    }
    Ok(TailCurve { kind, epsilons: eps.to_vec(), probs, lower, upper, n, trials })
}

fn log_ratio<T: Real>(s: &WalkSample<T>) -> f64 {
    (s.log_specrad - s.log_norm).as_f64().min(0.0)
}

fn log_delta<T: Real>(s: &WalkSample<T>) -> f64 {
    s.delta_n.as_f64().ln()
}

pub fn ratio_tail_at<T: Real>(samples: &SampleSet<T>, n: usize, eps: &[f64]) -> Result<TailCurve> {
    let logs = samples.at(n)?.into_iter().map(log_ratio).collect();
    curve(TailKind::Ratio, logs, eps, n)
}

pub fn delta_tail_at<T: Real>(samples: &SampleSet<T>, n: usize, eps: &[f64]) -> Result<TailCurve> {
    let logs = samples.at(n)?.into_iter().map(log_delta).collect();
    curve(TailKind::Delta, logs, eps, n)
}

/// [`ratio_tail_at`] at the final checkpoint.
pub fn ratio_tail<T: Real>(samples: &SampleSet<T>, eps: &[f64]) -> Result<TailCurve> {
    ratio_tail_at(samples, samples.final_n().ok_or(Error::EmptyInput)?, eps)
}

/// [`delta_tail_at`] at the final checkpoint.
pub fn delta_tail<T: Real>(samples: &SampleSet<T>, eps: &[f64]) -> Result<TailCurve> {
    delta_tail_at(samples, samples.final_n().ok_or(Error::EmptyInput)?, eps)
}
