use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ProjPoint;
use crate::linalg::{dot, normalized, svd, Dense};
use crate::rng::RngStream;
use crate::scalar::Real;

pub const MIN_REGULARITY_POINTS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityConfig {
    /// Sorted ascending, within `(0, 1]`.
    pub t_grid: Vec<f64>,
    /// Uniformly random unit normals.
    pub random_normals: usize,
    /// Points (evenly spaced in input order) that each contribute the best
    /// fitting hyperplane through them as a candidate.
    pub adaptive_points: usize,
    pub seed: u64,
}

impl Default for RegularityConfig {
    fn default() -> Self {
        Self {
            t_grid: vec![1e-4, 1e-3, 1e-2, 0.03, 0.1, 0.3, 1.0],
            random_normals: 1000,
            adaptive_points: 256,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateSource {
    Random,
    Principal,
    ThroughPoint,
}

/// `sup_H ν̂{x : δ(x, H) <= t}` over the sampled candidate hyperplanes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityProfile {
    pub t_grid: Vec<f64>,
    pub sup_probs: Vec<f64>,
    /// Source of a maximizing candidate for each `t`.
    pub worst_source: Vec<CandidateSource>,
    pub hyperplanes_sampled: usize,
    pub random_normals: usize,
    pub adaptive_normals: usize,
    pub points: usize,
}

impl RegularityProfile {
    pub fn is_monotone(&self) -> bool {
        self.sup_probs.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn prob_at(&self, t: f64) -> Option<f64> {
        self.t_grid.iter().position(|&x| x == t).map(|i| self.sup_probs[i])
    }
}

/// Unit vector spanning the least-occupied direction of `m` restricted to
/// the complement of `x` (or of nothing).
fn least_direction(m: &Dense<f64>, x: Option<&[f64]>) -> Option<Vec<f64>> {
    let d = m.dim();
    let a = match x {
        None => m.clone(),
        Some(x) => {
            // P M P + c x xᵀ with P the projector onto x⊥
            let p = Dense::from_row_major(
                d,
                (0..d * d).map(|k| f64::from(u8::from(k / d == k % d)) - x[k / d] * x[k % d]).collect(),
            );
            let pmp = p.matmul(m).matmul(&p);
            let c = (0..d).map(|i| m[(i, i)]).sum::<f64>() + 1.0;
            Dense::from_row_major(d, (0..d * d).map(|k| pmp.as_slice()[k] + c * x[k / d] * x[k % d]).collect())
        }
    };
    normalized(&svd(&a).u.column(d - 1))
}

pub fn regularity_profile<T: Real>(points: &[ProjPoint<T>], cfg: &RegularityConfig) -> Result<RegularityProfile> {
    if points.len() < MIN_REGULARITY_POINTS {
        return Err(Error::InsufficientSamples { needed: MIN_REGULARITY_POINTS, have: points.len() });
    }
    let t = &cfg.t_grid;
    if t.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !t.iter().all(|x| *x > 0.0 && *x <= 1.0) || !t.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Domain("t grid must be strictly increasing within (0, 1]".into()));
    }
    let d = points[0].dim();
    if let Some(p) = points.iter().find(|p| p.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: p.dim() });
    }
    let pts: Vec<Vec<f64>> = points.iter().map(|p| p.vec().iter().map(|x| x.as_f64()).collect()).collect();

    let mut candidates: Vec<(CandidateSource, Vec<f64>)> = Vec::new();
    let mut rng = RngStream::new(cfg.seed, 0).rng();
    while candidates.len() < cfg.random_normals {
        let g: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
        if let Some(v) = normalized(&g) {
            candidates.push((CandidateSource::Random, v));
        }
    }
    let mut second = Dense::zeros(d);
    for p in &pts {
        for i in 0..d {
            for j in 0..d {
                second[(i, j)] += p[i] * p[j];
            }
        }
    }
    let moment = second.scaled(1.0 / pts.len() as f64);
    let principal = svd(&moment);
    for i in 0..d {
        candidates.push((CandidateSource::Principal, principal.u.column(i)));
    }
    let k = cfg.adaptive_points.min(pts.len());
    for i in 0..k {
        let x = &pts[i * pts.len() / k];
        if let Some(v) = least_direction(&moment, Some(x)) {
            candidates.push((CandidateSource::ThroughPoint, v));
        }
    }
    let adaptive = candidates.len() - cfg.random_normals;

    let counts: Vec<Vec<usize>> = candidates
        .par_iter()
        .map(|(_, h)| {
            let mut dist: Vec<f64> = pts.iter().map(|x| dot(x, h).abs()).collect();
            dist.sort_by(f64::total_cmp);
            t.iter().map(|&ti| dist.partition_point(|&x| x <= ti)).collect()
        })
        .collect();
    let mut best = vec![0usize; t.len()];
    let mut worst_source = vec![CandidateSource::Random; t.len()];
    for (c, (src, _)) in counts.iter().zip(&candidates) {
        for j in 0..t.len() {
            if c[j] > best[j] {
                best[j] = c[j];
                worst_source[j] = *src;
            }
        }
    }
    let np = pts.len() as f64;
    Ok(RegularityProfile {
        t_grid: t.clone(),
        sup_probs: best.iter().map(|&b| b as f64 / np).collect(),
        worst_source,
        hyperplanes_sampled: candidates.len(),
        random_normals: cfg.random_normals,
        adaptive_normals: adaptive,
        points: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn through_point_normal_is_orthogonal() {
        let m = Dense::from_row_major(3, vec![2.0, 0.1, 0.0, 0.1, 1.0, 0.3, 0.0, 0.3, 0.5]);
        let x = normalized(&[1.0, 1.0, 0.0]).unwrap();
        let v = least_direction(&m, Some(&x)).unwrap();
        assert!(dot(&v, &x).abs() < 1e-12);
    }

    #[test]
    fn uniform_circle_matches_arcsine_law() {
        let n = 20_000;
        let pts: Vec<ProjPoint<f64>> = (0..n)
            .map(|i| {
                let a = std::f64::consts::PI * (i as f64 + 0.5) / n as f64;
                ProjPoint::new(&[a.cos(), a.sin()]).unwrap()
            })
            .collect();
        let cfg = RegularityConfig { t_grid: vec![0.01, 0.1, 0.5], random_normals: 200, adaptive_points: 64, seed: 3 };
        let prof = regularity_profile(&pts, &cfg).unwrap();
        for (t, p) in prof.t_grid.iter().zip(&prof.sup_probs) {
            let exact = 2.0 / std::f64::consts::PI * t.asin();
            assert!((p - exact).abs() < 0.02, "t={t}: {p} vs {exact}");
        }
    }

    #[test]
    fn equal_points_fill_the_unit_slab() {
        let pts = vec![ProjPoint::new(&[0.6, 0.8]).unwrap(); 1000];
        let cfg = RegularityConfig { t_grid: vec![1e-3, 1.0], random_normals: 10, adaptive_points: 4, seed: 1 };
        let prof = regularity_profile(&pts, &cfg).unwrap();
        assert_eq!(prof.sup_probs, vec![1.0, 1.0]);
    }
}
