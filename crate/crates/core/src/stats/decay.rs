use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{median, ols_slope, wilson_interval};
use crate::error::{Error, Result};
use crate::linalg::{normalized, svd};
use crate::measure::MatrixMeasure;
use crate::rng::RngStream;
use crate::scalar::Real;
use crate::walk::{with_threads, Side, Stepper, WalkState};

/// The five contraction estimates for a strongly irreducible proximal `μ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayItem {
    /// `sup_v P(|L_n v|/|L_n| <= e^{-εn})`
    NormRatio = 1,
    /// `sup_{x,y} P(δ(L_n x, L_n y) >= e^{-cn})`
    PairContraction = 2,
    /// `sup_x P(δ(R_n x, v⁺_{R_n}) >= e^{-cn})`
    AttractingPoint = 3,
    /// `sup_x P(δ(R_n x, R_N x) >= e^{-cn})`, `N >> n`
    Coupling = 4,
    /// Item 4 for the transposed measure acting on normals.
    DualCoupling = 5,
}

impl DecayItem {
    pub fn from_index(i: u8) -> Result<Self> {
        Ok(match i {
            1 => Self::NormRatio,
            2 => Self::PairContraction,
            3 => Self::AttractingPoint,
            4 => Self::Coupling,
            5 => Self::DualCoupling,
            _ => return Err(Error::Domain(format!("decay item {i} not in 1..=5"))),
        })
    }

    pub fn index(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayConfig {
    pub item: DecayItem,
    /// Strictly increasing, positive.
    pub n_grid: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// `ε` for item 1, `c` otherwise; defaults to `(λ̂_1 - λ̂_2)/2` estimated
    /// from the same trials at the largest `n`.
    #[serde(default)]
    pub rate: Option<f64>,
    /// Size of the deterministic point grid.
    #[serde(default = "default_grid")]
    pub grid_points: usize,
    /// Explicit points replacing the grid.
    #[serde(default)]
    pub points: Option<Vec<Vec<f64>>>,
    /// `N` for items 4 and 5; defaults to `4 max(n_grid)`.
    #[serde(default)]
    pub horizon: Option<usize>,
}

fn default_grid() -> usize {
    8
}

impl DecayConfig {
    pub fn new(item: DecayItem, n_grid: Vec<usize>, trials: usize, seed: u64) -> Self {
        Self { item, n_grid, trials, seed, rate: None, grid_points: default_grid(), points: None, horizon: None }
    }
}

/// Probabilities against `n`, each the worst over the point grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayCurve {
    pub item: DecayItem,
    pub rate: f64,
    pub rate_estimated: bool,
    pub n_grid: Vec<usize>,
    pub probs: Vec<f64>,
    pub half_widths: Vec<f64>,
    /// `-slope` of the worst median log-quantity against `n`.
    pub fitted_rate: f64,
    pub worst_median_log: Vec<f64>,
    pub trials: usize,
    pub grid_points: usize,
    pub horizon: Option<usize>,
}

impl DecayCurve {
    pub fn prob_at(&self, n: usize) -> Option<f64> {
        self.n_grid.iter().position(|&m| m == n).map(|i| self.probs[i])
    }
}

/// Deterministic unit vectors: evenly spaced angles for `d = 2`; otherwise
/// the basis, the diagonal, then fixed Gaussian directions.
pub fn direction_grid(d: usize, m: usize) -> Vec<Vec<f64>> {
    if d == 2 {
        return (0..m)
            .map(|j| {
                let a = std::f64::consts::PI * j as f64 / m as f64;
                vec![a.cos(), a.sin()]
            })
            .collect();
    }
    let mut out: Vec<Vec<f64>> = (0..d.min(m))
        .map(|i| (0..d).map(|j| f64::from(u8::from(i == j))).collect())
        .collect();
    if out.len() < m {
        out.push(vec![1.0 / (d as f64).sqrt(); d]);
    }
    let mut rng = RngStream::new(0x6772_6964, d as u64).rng();
    while out.len() < m {
        let g: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
        if let Some(v) = normalized(&g) {
            out.push(v);
        }
    }
    out
}

struct TrialLogs {
    /// `[n index][grid element]`
    logs: Vec<Vec<f64>>,
    gap: f64,
}

fn cast<T: Real>(v: &[f64]) -> Vec<T> {
    v.iter().map(|&x| T::lit(x)).collect()
}

fn trial<T: Real>(
    stepper: &Stepper<'_, T>,
    dim: usize,
    item: DecayItem,
    cfg: &DecayConfig,
    points: &[Vec<T>],
    horizon: usize,
    stream: RngStream,
) -> Result<TrialLogs> {
    let mut rng = stream.rng();
    let side = match item {
        DecayItem::NormRatio | DecayItem::PairContraction => Side::Left,
        _ => Side::Right,
    };
    let last = *cfg.n_grid.last().expect("validated");
    let steps = if matches!(item, DecayItem::Coupling | DecayItem::DualCoupling) { horizon } else { last };
    let draws: Vec<_> = (0..steps).map(|_| stepper.draw(&mut rng).1).collect();

    // backward[i][j] = direction of X_{n_i+1} ⋯ X_N x_j
    let mut backward: Vec<Vec<Vec<T>>> = Vec::new();
    if steps > last {
        let mut y: Vec<Vec<T>> = points.to_vec();
        let mut slots = vec![Vec::new(); cfg.n_grid.len()];
        let mut gi = cfg.n_grid.len();
        for i in (0..steps).rev() {
            // after applying X_{i+1}, y holds X_{i+1} ⋯ X_N x
            for v in y.iter_mut() {
                *v = normalized(&draws[i].matrix.mul_vec(v)).ok_or(Error::ZeroVector)?;
            }
            while gi > 0 && cfg.n_grid[gi - 1] == i {
                gi -= 1;
                slots[gi] = y.clone();
            }
        }
        backward = slots;
    }

    let mut st = WalkState::new(dim, side, true);
    let mut logs = Vec::with_capacity(cfg.n_grid.len());
    let mut gi = 0;
    for (i, x) in draws.iter().take(last).enumerate() {
        st.step_prepared(x)?;
        if cfg.n_grid[gi] != i + 1 {
            continue;
        }
        let row: Vec<f64> = match item {
            DecayItem::NormRatio => {
                let sample = st.observe()?;
                points.iter().map(|v| (st.log_apply_norm(v) - sample.log_norm).as_f64().min(0.0)).collect()
            }
            DecayItem::PairContraction => {
                let mut r = Vec::new();
                for a in 0..points.len() {
                    for b in a + 1..points.len() {
                        r.push(st.log_delta_images(&points[a], &points[b])?.as_f64());
                    }
                }
                r
            }
            DecayItem::AttractingPoint => {
                let h = svd(st.rep()).vt.row(0).to_vec();
                points.iter().map(|v| st.log_delta_images(v, &h).map(|x| x.as_f64())).collect::<Result<_>>()?
            }
            DecayItem::Coupling | DecayItem::DualCoupling => points
                .iter()
                .zip(&backward[gi])
                .map(|(v, y)| st.log_delta_images(v, y).map(|x| x.as_f64()))
                .collect::<Result<_>>()?,
        };
        logs.push(row);
        gi += 1;
        if gi == cfg.n_grid.len() {
            break;
        }
    }
    let fin = st.observe()?;
    let c = fin.cartan.values();
    let gap = if c.len() >= 2 { (c[0] - c[1]).as_f64() / last as f64 } else { 0.0 };
    Ok(TrialLogs { logs, gap })
}

/// Estimates one decay curve. Requires `μ` flagged strongly irreducible and
/// proximal.
pub fn decay_suite<T: Real>(mu: &MatrixMeasure<T>, cfg: &DecayConfig, threads: Option<usize>) -> Result<DecayCurve> {
    let flags = mu.flags();
    if !flags.strongly_irreducible || !flags.proximal {
        return Err(Error::FlagViolation("decay estimates need a strongly irreducible proximal measure"));
    }
    if cfg.n_grid.is_empty() || cfg.n_grid[0] == 0 || !cfg.n_grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Domain("n grid must be positive and strictly increasing".into()));
    }
    if cfg.trials == 0 {
        return Err(Error::Domain("at least one trial is required".into()));
    }
    let d = mu.dim();
    if d < 2 {
        return Err(Error::Domain("decay estimates need dimension at least 2".into()));
    }
    let last = *cfg.n_grid.last().expect("nonempty");
    let horizon = cfg.horizon.unwrap_or(4 * last);
    let coupling = matches!(cfg.item, DecayItem::Coupling | DecayItem::DualCoupling);
    if coupling && horizon <= last {
        return Err(Error::Domain(format!("horizon {horizon} must exceed the largest n {last}")));
    }
    let raw = match &cfg.points {
        Some(p) => p.clone(),
        None => direction_grid(d, cfg.grid_points.max(2)),
    };
    let points: Vec<Vec<T>> = raw
        .iter()
        .map(|p| {
            if p.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: p.len() });
            }
            normalized(&cast::<T>(p)).ok_or(Error::ZeroVector)
        })
        .collect::<Result<_>>()?;
    if cfg.item == DecayItem::PairContraction && points.len() < 2 {
        return Err(Error::Domain("pair contraction needs at least two points".into()));
    }

    let dual;
    let measure = if cfg.item == DecayItem::DualCoupling {
        dual = mu.transpose_measure();
        &dual
    } else {
        mu
    };
    let stepper = Stepper::new(measure, true);
    let results = with_threads(threads, || {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                trial(&stepper, d, cfg.item, cfg, &points, horizon, RngStream::new(cfg.seed, t as u64))
                    .map_err(|e| Error::Trial { index: t, source: Box::new(e) })
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let (rate, rate_estimated) = match cfg.rate {
        Some(r) => (r, false),
        None => (0.5 * results.iter().map(|r| r.gap).sum::<f64>() / results.len() as f64, true),
    };
    let elements = results[0].logs[0].len();
    let (mut probs, mut half_widths, mut worst_median_log) = (vec![], vec![], vec![]);
    for (ni, &n) in cfg.n_grid.iter().enumerate() {
        let threshold = -rate * n as f64;
        let mut best = 0usize;
        let mut worst_med = f64::NEG_INFINITY;
        for e in 0..elements {
            let vals: Vec<f64> = results.iter().map(|r| r.logs[ni][e]).collect();
            let hits = match cfg.item {
                DecayItem::NormRatio => vals.iter().filter(|&&v| v <= threshold).count(),
                _ => vals.iter().filter(|&&v| v >= threshold).count(),
            };
            best = best.max(hits);
            let med = median(&vals);
            worst_med = match cfg.item {
                // the smallest ratio is the worst direction
                DecayItem::NormRatio if e == 0 => med,
                DecayItem::NormRatio => worst_med.min(med),
                _ => worst_med.max(med),
            };
        }
        let (lo, hi) = wilson_interval(best, cfg.trials);
        probs.push(best as f64 / cfg.trials as f64);
        half_widths.push(0.5 * (hi - lo));
        worst_median_log.push(worst_med);
    }
    let fitted_rate = if cfg.n_grid.len() >= 2 {
        let x: Vec<f64> = cfg.n_grid.iter().map(|&n| n as f64).collect();
        -ols_slope(&x, &worst_median_log)
    } else {
        f64::NAN
    };
    Ok(DecayCurve {
        item: cfg.item,
        rate,
        rate_estimated,
        n_grid: cfg.n_grid.clone(),
        probs,
        half_widths,
        fitted_rate,
        worst_median_log,
        trials: cfg.trials,
        grid_points: points.len(),
        horizon: coupling.then_some(horizon),
    })
}
