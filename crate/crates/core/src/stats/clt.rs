use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::{ks_statistic, mean_std, two_sample_ks};
use crate::error::{Error, Result};
use crate::measure::MatrixMeasure;
use crate::scalar::Real;
use crate::walk::{run_monte_carlo, SampleSet, Side, WalkConfig, WalkSample};

pub const MIN_CLT_TRIALS: usize = 1000;

/// Below this `σ̂` counts as zero.
const SIGMA_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    #[default]
    LogSpecrad,
    LogNorm,
}

impl Observable {
    fn get<T: Real>(self, s: &WalkSample<T>) -> f64 {
        match self {
            Observable::LogSpecrad => s.log_specrad.as_f64(),
            Observable::LogNorm => s.log_norm.as_f64(),
        }
    }

    fn other(self) -> Self {
        match self {
            Observable::LogSpecrad => Observable::LogNorm,
            Observable::LogNorm => Observable::LogSpecrad,
        }
    }
}

/// Source of `λ̂` in `(X_n - n λ̂)/√n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Centering {
    /// Externally estimated, normally from [`pilot_lambda`].
    Pilot(f64),
    /// Mean of `log_norm/n` over the same samples.
    InSample,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CltReport {
    pub observable: Observable,
    pub centering: Centering,
    pub n: usize,
    pub trials: usize,
    pub lambda_hat: f64,
    /// Sample standard deviation of the normalized chosen observable.
    pub sigma_hat: f64,
    /// Same for the other observable.
    pub sigma_hat_other: f64,
    pub normalized_samples: Vec<f64>,
    /// KS distance to `N(0, σ̂²)`.
    pub ks_vs_gaussian: f64,
    /// Two-sample KS distance between the normalized `ln|L_n|` and `ln ρ(L_n)`.
    pub ks_norm_vs_specrad: f64,
}

impl CltReport {
    /// `|σ̂ - σ̂_other| / max(σ̂, σ̂_other)`.
    pub fn sigma_relative_difference(&self) -> f64 {
        (self.sigma_hat - self.sigma_hat_other).abs() / self.sigma_hat.max(self.sigma_hat_other)
    }
}

/// `λ̂ = mean ln|L_n|/n` over an independent run, meant to be longer than
/// the run being normalized.
pub fn pilot_lambda<T: Real>(
    mu: &MatrixMeasure<T>,
    n: usize,
    trials: usize,
    seed: u64,
    threads: Option<usize>,
) -> Result<f64> {
    let mut cfg = WalkConfig::final_only(n, Side::Left);
    cfg.full_spectrum = false;
    let set = run_monte_carlo(mu, &cfg, trials, seed, threads)?;
    let logs: Vec<f64> = set.final_samples()?.iter().map(|s| s.log_norm.as_f64() / n as f64).collect();
    Ok(mean_std(&logs).0)
}

pub fn clt_report<T: Real>(samples: &SampleSet<T>, observable: Observable, centering: Centering) -> Result<CltReport> {
    let fin = samples.final_samples()?;
    if fin.len() < MIN_CLT_TRIALS {
        return Err(Error::InsufficientSamples { needed: MIN_CLT_TRIALS, have: fin.len() });
    }
    let n = samples.final_n().ok_or(Error::EmptyInput)?;
    let nf = n as f64;
    let lambda_hat = match centering {
        Centering::Pilot(l) => l,
        Centering::InSample => mean_std(&fin.iter().map(|s| s.log_norm.as_f64() / nf).collect::<Vec<_>>()).0,
    };
    let normalize = |o: Observable| fin.iter().map(|s| (o.get(s) - nf * lambda_hat) / nf.sqrt()).collect::<Vec<_>>();
    let chosen = normalize(observable);
    let other = normalize(observable.other());
    let sigma_hat = mean_std(&chosen).1;
    let sigma_hat_other = mean_std(&other).1;

    let flags = samples.flags;
    if sigma_hat < SIGMA_FLOOR && flags.strongly_irreducible && flags.unbounded_image {
        return Err(Error::DegenerateVariance { sigma: sigma_hat });
    }
    let ks_vs_gaussian = if sigma_hat < SIGMA_FLOOR {
        ks_statistic(&chosen, |x| if x >= 0.0 { 1.0 } else { 0.0 })?
    } else {
        let g = Normal::new(0.0, sigma_hat).map_err(|e| Error::Domain(e.to_string()))?;
        ks_statistic(&chosen, |x| g.cdf(x))?
    };
    let ks_norm_vs_specrad = two_sample_ks(&chosen, &other)?;
    Ok(CltReport {
        observable,
        centering,
        n,
        trials: fin.len(),
        lambda_hat,
        sigma_hat,
        sigma_hat_other,
        normalized_samples: chosen,
        ks_vs_gaussian,
        ks_norm_vs_specrad,
    })
}
