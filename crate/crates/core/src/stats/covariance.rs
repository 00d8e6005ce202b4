use serde::{Deserialize, Serialize};

use super::mean_std;
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, Dense};
use crate::scalar::Real;
use crate::walk::SampleSet;

const MIN_COVARIANCE_TRIALS: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceReport {
    pub n: usize,
    pub trials: usize,
    /// `λ̂ = mean jordan/n`.
    pub mean_vector: Vec<f64>,
    /// Sample covariance of `(jordan - n λ̂)/√n`.
    pub k_hat: Vec<Vec<f64>>,
    /// Eigenvalues of `K̂`, non-increasing.
    pub eigenvalues: Vec<f64>,
    /// Sample variance of `Σ_i jordan_i / √n`.
    pub null_direction_variance: f64,
}

impl CovarianceReport {
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let d = self.k_hat.len();
        (0..d).all(|i| (0..d).all(|j| (self.k_hat[i][j] - self.k_hat[j][i]).abs() <= tol))
    }

    pub fn is_psd(&self, slack: f64) -> bool {
        self.eigenvalues.iter().all(|&e| e >= -slack)
    }
}

/// Empirical covariance of the normalized Jordan vectors at the final
/// checkpoint. Needs a measure flagged Zariski dense.
pub fn eigen_clt_covariance<T: Real>(samples: &SampleSet<T>) -> Result<CovarianceReport> {
    if !samples.flags.zariski_dense {
        return Err(Error::FlagViolation("eigenvalue-vector CLT needs a Zariski-dense measure"));
    }
    let fin = samples.final_samples()?;
    if fin.len() < MIN_COVARIANCE_TRIALS {
        return Err(Error::InsufficientSamples { needed: MIN_COVARIANCE_TRIALS, have: fin.len() });
    }
    let n = samples.final_n().ok_or(Error::EmptyInput)?;
    let nf = n as f64;
    let t = fin.len();
    let d = fin[0].jordan.values().len();
    let rows: Vec<Vec<f64>> =
        fin.iter().map(|s| s.jordan.values().iter().map(|j| j.as_f64()).collect()).collect();
    let mean_vector: Vec<f64> = (0..d).map(|i| rows.iter().map(|r| r[i]).sum::<f64>() / (t as f64 * nf)).collect();
    let centered: Vec<Vec<f64>> =
        rows.iter().map(|r| r.iter().zip(&mean_vector).map(|(x, m)| (x - nf * m) / nf.sqrt()).collect()).collect();
    let mut k_hat = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..=i {
            let c = centered.iter().map(|r| r[i] * r[j]).sum::<f64>() / (t as f64 - 1.0);
            k_hat[i][j] = c;
            k_hat[j][i] = c;
        }
    }
    let mut eig: Vec<f64> = eigenvalues(&Dense::from_row_major(d, k_hat.concat()))?.iter().map(|z| z.re).collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    let sums: Vec<f64> = rows.iter().map(|r| r.iter().sum::<f64>() / nf.sqrt()).collect();
    let null_direction_variance = mean_std(&sums).1.powi(2);
    Ok(CovarianceReport { n, trials: t, mean_vector, k_hat, eigenvalues: eig, null_direction_variance })
}
