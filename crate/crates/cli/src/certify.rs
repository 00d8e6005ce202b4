//! Single-matrix certificates and the brute-force batch.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use specrad::geometry::{kak, proximality_certificate, spectral_radius, SquareMatrix};
use specrad::linalg::Dense;
use specrad::rng::RngStream;
use specrad::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub dim: usize,
    pub delta_g: f64,
    pub gap_ratio: f64,
    pub certified: bool,
    pub lower_bound: Option<f64>,
    pub ratio: f64,
    pub relative_top_gap: Option<f64>,
    pub bound_verified: Option<bool>,
    pub top_is_simple: Option<bool>,
}

impl CertifyReport {
    /// A certificate exists but its conclusions fail.
    pub fn violated(&self) -> bool {
        self.certified && !(self.bound_verified == Some(true) && self.top_is_simple == Some(true))
    }
}

pub fn certify(g: &SquareMatrix<f64>, tol: f64, simple_gap: f64) -> Result<CertifyReport> {
    let d = kak(g)?;
    let ratio = spectral_radius(g)? / d.a[0];
    let cert = proximality_certificate(g)?;
    let check = cert.map(|c| c.verify(g, tol, simple_gap)).transpose()?;
    Ok(CertifyReport {
        dim: g.dim(),
        delta_g: d.delta(),
        gap_ratio: d.gap_ratio(),
        certified: cert.is_some(),
        lower_bound: cert.map(|c| c.lower_bound),
        ratio,
        relative_top_gap: check.map(|c| c.relative_top_gap),
        bound_verified: check.map(|c| c.bound_holds),
        top_is_simple: check.map(|c| c.top_is_simple),
    })
}

pub const MIXES: usize = 5;

fn pow<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    10f64.powf(rng.random_range(lo..hi))
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    (0..d * d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Test matrix `index` of the batch: dimension in `2..=max_dim`, one of
/// [`MIXES`] entry distributions.
///
/// 0. i.i.d. Gaussian
/// 1. Gaussian with rows scaled by `10^U(-3,3)`
/// 2. `s u vᵀ` plus Gaussian noise, `s = 10^U(0,4)`
/// 3. `P diag(10^U(-3,3)) P⁻¹` for Gaussian `P`
/// 4. uniform `[-1,1]` entries times `10^U(-6,6)`
pub fn random_matrix(master: u64, index: u64, max_dim: usize) -> Dense<f64> {
    let mut rng = RngStream::new(master, index).rng();
    let d = rng.random_range(2..=max_dim);
    let mix = (index % MIXES as u64) as usize;
    match mix {
        0 => Dense::from_row_major(d, gaussian(&mut rng, d)),
        1 => {
            let mut m = gaussian(&mut rng, d);
            for i in 0..d {
                let s = pow(&mut rng, -3.0, 3.0);
                m[i * d..(i + 1) * d].iter_mut().for_each(|x| *x *= s);
            }
            Dense::from_row_major(d, m)
        }
        2 => {
            let s = pow(&mut rng, 0.0, 4.0);
            let u: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            let noise = gaussian(&mut rng, d);
            Dense::from_row_major(d, (0..d * d).map(|k| s * u[k / d] * v[k % d] + noise[k]).collect())
        }
        3 => {
            let p = Dense::from_row_major(d, gaussian(&mut rng, d));
            let diag: Vec<f64> = (0..d).map(|_| pow(&mut rng, -3.0, 3.0)).collect();
            match p.inverse() {
                Some(pi) => p.matmul(&Dense::from_diagonal(&diag)).matmul(&pi),
                None => Dense::from_diagonal(&diag),
            }
        }
        _ => {
            let s = pow(&mut rng, -6.0, 6.0);
            Dense::from_row_major(d, (0..d * d).map(|_| s * rng.random_range(-1.0..1.0)).collect())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub index: u64,
    pub dim: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub master_seed: u64,
    pub requested: usize,
    /// Matrices accepted as numerically invertible.
    pub checked: usize,
    pub skipped_singular: usize,
    pub certified: usize,
    pub certified_by_dim: Vec<(usize, usize)>,
    /// Smallest `ρ/|g| - δ_g/2` over certified matrices.
    pub min_margin: f64,
    pub violations: Vec<Violation>,
    pub numerical_failures: Vec<Violation>,
}

pub fn certify_batch(count: usize, master: u64, max_dim: usize, tol: f64, simple_gap: f64) -> BatchReport {
    enum Outcome {
        Skipped,
        Checked(usize, Option<f64>, Option<Violation>),
        Failed(Violation),
    }
    let outcomes: Vec<Outcome> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let m = random_matrix(master, i, max_dim);
            let d = m.dim();
            let Ok(g) = SquareMatrix::new(m) else { return Outcome::Skipped };
            match certify(&g, tol, simple_gap) {
                Err(e) => Outcome::Failed(Violation { index: i, dim: d, detail: e.to_string() }),
                Ok(r) => {
                    let margin = r.lower_bound.map(|b| r.ratio - b);
                    let v = r.violated().then(|| Violation { index: i, dim: d, detail: format!("{r:?}") });
                    Outcome::Checked(d, margin, v)
                }
            }
        })
        .collect();
    let mut rep = BatchReport {
        master_seed: master,
        requested: count,
        checked: 0,
        skipped_singular: 0,
        certified: 0,
        certified_by_dim: (2..=max_dim).map(|d| (d, 0)).collect(),
        min_margin: f64::INFINITY,
        violations: vec![],
        numerical_failures: vec![],
    };
    for o in outcomes {
        match o {
            Outcome::Skipped => rep.skipped_singular += 1,
            Outcome::Failed(v) => rep.numerical_failures.push(v),
            Outcome::Checked(d, margin, v) => {
                rep.checked += 1;
                if let Some(m) = margin {
                    rep.certified += 1;
                    rep.certified_by_dim[d - 2].1 += 1;
                    rep.min_margin = rep.min_margin.min(m);
                }
                rep.violations.extend(v);
            }
        }
    }
    rep
}
