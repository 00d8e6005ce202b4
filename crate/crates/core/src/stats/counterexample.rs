use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::two_sample_ks;
use crate::error::{Error, Result};
use crate::geometry::dense_eigen_moduli;
use crate::measure::notconv_measure;
use crate::rng::RngStream;
use crate::walk::{with_threads, Side, WalkState};

const ODD_TOLERANCE: f64 = 1e-9;
/// Distance of `ln ρ / ln λ` from an integer still counted as exact.
const INTEGER_TOLERANCE: f64 = 1e-6;
const REFERENCE_TAG: u64 = 0x7265_6665_7265_6e63;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleConfig {
    pub lambda: f64,
    pub theta: f64,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    #[serde(default = "default_reference")]
    pub reference_draws: usize,
    #[serde(default = "default_threshold")]
    pub ks_threshold: f64,
}

fn default_reference() -> usize {
    100_000
}

fn default_threshold() -> f64 {
    0.02
}

impl Default for CounterexampleConfig {
    fn default() -> Self {
        Self {
            lambda: 2.0,
            theta: 0.5,
            n: 401,
            trials: 10_000,
            seed: 0,
            reference_draws: default_reference(),
            ks_threshold: default_threshold(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub config: CounterexampleConfig,
    /// Largest even checkpoint is `2k`.
    pub k: usize,
    pub odd_checkpoints: usize,
    pub odd_max_abs_log_specrad: f64,
    pub odd_exact: bool,
    /// Even checkpoints where `round(ln ρ(L_2j)/ln λ) != |S_j|`.
    pub abs_mismatches: usize,
    /// Even checkpoints where the diagonal of `L_2j` gives the wrong signed `S_j`.
    pub signed_mismatches: usize,
    pub max_integer_residual: f64,
    pub s_exact: bool,
    /// Two-sample KS distance of `ln ρ(L_2k)/(ln λ √k)` against
    /// `|N(0, 2θ(1-θ))|` reference draws.
    pub ks_distance: f64,
    pub ks_pass: bool,
    pub y_variance: f64,
    pub y_variance_expected: f64,
    pub final_values: Vec<f64>,
}

impl CounterexampleReport {
    pub fn exact_checks_pass(&self) -> bool {
        self.odd_exact && self.s_exact
    }

    pub fn y_variance_relative_error(&self) -> f64 {
        (self.y_variance - self.y_variance_expected).abs() / self.y_variance_expected
    }
}

struct PathOutcome {
    odd_max: f64,
    abs_mismatches: usize,
    signed_mismatches: usize,
    residual: f64,
    final_value: f64,
    y_sum: i64,
    y_sq: i64,
}

fn run_path(cfg: &CounterexampleConfig, stream: RngStream) -> Result<PathOutcome> {
    let mu = notconv_measure::<f64>(cfg.lambda, cfg.theta)?;
    let ln_l = cfg.lambda.ln();
    let mut rng = stream.rng();
    let mut st = WalkState::<f64>::new(2, Side::Left, false);
    let mut out = PathOutcome {
        odd_max: 0.0,
        abs_mismatches: 0,
        signed_mismatches: 0,
        residual: 0.0,
        final_value: f64::NAN,
        y_sum: 0,
        y_sq: 0,
    };
    let (mut s, mut prev_eps) = (0i64, 0i64);
    let k = cfg.n / 2;
    for i in 1..=cfg.n {
        let draw = mu.sample(&mut rng);
        let eps = i64::from(draw.atom == Some(1));
        st.step(&draw.matrix)?;
        let log_rho = st.log_scale() + dense_eigen_moduli(st.rep())?[0].ln();
        if i % 2 == 1 {
            out.odd_max = out.odd_max.max(log_rho.abs());
            prev_eps = eps;
            continue;
        }
        let y = prev_eps - eps;
        s += y;
        out.y_sum += y;
        out.y_sq += y * y;
        let x = log_rho / ln_l;
        let r = x.round();
        out.residual = out.residual.max((x - r).abs());
        if r as i64 != s.abs() || (x - r).abs() > INTEGER_TOLERANCE {
            out.abs_mismatches += 1;
        }
        let rep = st.rep();
        let signed = ((rep[(0, 0)] / rep[(1, 1)]).abs().ln() / (2.0 * ln_l)).round() as i64;
        if signed != s {
            out.signed_mismatches += 1;
        }
        if i / 2 == k {
            out.final_value = log_rho / (ln_l * (k as f64).sqrt());
        }
    }
    Ok(out)
}

/// Runs the non-strongly-irreducible example: exact odd-time and even-time
/// structure on every path, and the limit law of the normalized
/// `ln ρ(L_2k)` compared with a folded Gaussian.
pub fn counterexample_report(cfg: &CounterexampleConfig, threads: Option<usize>) -> Result<CounterexampleReport> {
    if cfg.n < 2 {
        return Err(Error::Domain("n must be at least 2".into()));
    }
    if cfg.trials == 0 || cfg.reference_draws == 0 {
        return Err(Error::Domain("trials and reference draws must be positive".into()));
    }
    notconv_measure::<f64>(cfg.lambda, cfg.theta)?;
    let paths = with_threads(threads, || {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_path(cfg, RngStream::new(cfg.seed, t as u64)).map_err(|e| Error::Trial { index: t, source: Box::new(e) }))
            .collect::<Result<Vec<_>>>()
    })??;

    let var = 2.0 * cfg.theta * (1.0 - cfg.theta);
    let normal = Normal::new(0.0, var.sqrt()).map_err(|e| Error::Domain(e.to_string()))?;
    let mut rng = RngStream::new(cfg.seed, 0).fork(REFERENCE_TAG).rng();
    let reference: Vec<f64> = (0..cfg.reference_draws).map(|_| normal.sample(&mut rng).abs()).collect();
    let final_values: Vec<f64> = paths.iter().map(|p| p.final_value).collect();
    let ks_distance = two_sample_ks(&final_values, &reference)?;

    let k = cfg.n / 2;
    let count = (cfg.trials * k) as f64;
    let y_mean = paths.iter().map(|p| p.y_sum).sum::<i64>() as f64 / count;
    let y_variance = paths.iter().map(|p| p.y_sq).sum::<i64>() as f64 / count - y_mean * y_mean;
    let odd_max = paths.iter().map(|p| p.odd_max).fold(0.0, f64::max);
    let abs_mismatches = paths.iter().map(|p| p.abs_mismatches).sum();
    let signed_mismatches = paths.iter().map(|p| p.signed_mismatches).sum();
    Ok(CounterexampleReport {
        config: cfg.clone(),
        k,
        odd_checkpoints: cfg.n.div_ceil(2),
        odd_max_abs_log_specrad: odd_max,
        odd_exact: odd_max < ODD_TOLERANCE,
        abs_mismatches,
        signed_mismatches,
        max_integer_residual: paths.iter().map(|p| p.residual).fold(0.0, f64::max),
        s_exact: abs_mismatches == 0 && signed_mismatches == 0,
        ks_distance,
        ks_pass: ks_distance < cfg.ks_threshold,
        y_variance,
        y_variance_expected: var,
        final_values,
    })
}
