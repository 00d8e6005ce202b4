//! Estimators and checks on [`SampleSet`](crate::walk::SampleSet)s.

mod clt;
mod counterexample;
mod covariance;
mod decay;
mod ks;
mod lyapunov;
mod regularity;
mod tails;

pub use clt::{clt_report, pilot_lambda, Centering, CltReport, Observable, MIN_CLT_TRIALS};
pub use counterexample::{counterexample_report, CounterexampleConfig, CounterexampleReport};
pub use covariance::{eigen_clt_covariance, CovarianceReport};
pub use decay::{decay_suite, direction_grid, DecayConfig, DecayCurve, DecayItem};
pub use ks::{ks_statistic, two_sample_ks};
pub use lyapunov::{lyapunov_estimate, LyapunovEstimate, MIN_LYAPUNOV_TRIALS};
pub use regularity::{regularity_profile, RegularityConfig, RegularityProfile, MIN_REGULARITY_POINTS};
pub use tails::{delta_tail, delta_tail_at, ratio_tail, ratio_tail_at, wilson_interval, TailCurve, TailKind};

/// Mean and unbiased standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|x| (x - mean).powi(2)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// Standard error of the mean.
pub fn std_error(values: &[f64]) -> f64 {
    mean_std(values).1 / (values.len() as f64).sqrt()
}

/// Ordinary least-squares slope of `y` on `x`.
pub fn ols_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Median of finite values (mean of the middle pair for even length).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    match n {
        0 => f64::NAN,
        _ if n % 2 == 1 => v[n / 2],
        _ => 0.5 * (v[n / 2 - 1] + v[n / 2]),
    }
}
