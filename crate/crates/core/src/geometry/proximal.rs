//! Sufficient proximality test from the Cartan data of a single matrix.
//!
//! If `δ_g := δ(v_g^+, H_g^-) > 2 sqrt(a_2/a_1)` then `ρ(g)/|g| >= δ_g/2`
//! and `g` has a unique eigenvalue of maximal modulus. A missing certificate
//! says nothing about proximality.

use serde::{Deserialize, Serialize};

use super::{eigen_moduli, kak, SquareMatrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProximalityCertificate<T> {
    pub delta_g: T,
    /// `a_2(g) / a_1(g)`.
    pub gap_ratio: T,
    /// `δ_g / 2`, a lower bound for `ρ(g) / |g|`.
    pub lower_bound: T,
}

/// Outcome of re-checking a certificate against the eigenvalues of `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateCheck<T> {
    /// `ρ(g) / |g|`.
    pub ratio: T,
    /// `(ρ_1 - ρ_2) / ρ_1`.
    pub relative_top_gap: T,
    pub bound_holds: bool,
    pub top_is_simple: bool,
}

impl<T: Real> ProximalityCertificate<T> {
    /// Checks `ρ/|g| >= δ_g/2 - tol` and `(ρ_1 - ρ_2)/ρ_1 > simple_gap`.
    pub fn verify(&self, g: &SquareMatrix<T>, tol: T, simple_gap: T) -> Result<CertificateCheck<T>> {
        let moduli = eigen_moduli(g)?;
        let norm = kak(g)?.a[0];
        let ratio = moduli[0] / norm;
        let relative_top_gap = if moduli.len() > 1 { (moduli[0] - moduli[1]) / moduli[0] } else { T::one() };
        Ok(CertificateCheck {
            ratio,
            relative_top_gap,
            bound_holds: ratio >= self.lower_bound - tol,
            top_is_simple: relative_top_gap > simple_gap,
        })
    }
}

/// Certificate when `δ_g > 2 sqrt(a_2/a_1)`; structurally absent for tied
/// top singular values.
pub fn proximality_certificate<T: Real>(g: &SquareMatrix<T>) -> Result<Option<ProximalityCertificate<T>>> {
    if g.dim() == 1 {
        // every 1x1 matrix is proximal with ρ = |g|
        return Ok(Some(ProximalityCertificate { delta_g: T::one(), gap_ratio: T::zero(), lower_bound: T::lit(0.5) }));
    }
    let d = kak(g)?;
    if d.degenerate {
        return Ok(None);
    }
    let delta_g = d.delta();
    let gap_ratio = d.gap_ratio();
    if delta_g > T::lit(2.0) * gap_ratio.sqrt() {
        Ok(Some(ProximalityCertificate { delta_g, gap_ratio, lower_bound: delta_g / T::lit(2.0) }))
    } else {
        Ok(None)
    }
}

/// Contraction constants on `U_ε = {x : δ(x, H_g^-) > ε}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContractionData<T> {
    /// `(a_2/a_1) / ε^2`: Lipschitz constant of `x ↦ g·x` on `U_ε`.
    pub lipschitz_bound: T,
    /// `(a_2/a_1) / ε`: `g · U_ε` lies in the ball of this radius around `v_g^+`.
    pub image_radius: T,
}

pub fn contraction_data<T: Real>(g: &SquareMatrix<T>, eps: T) -> Result<ContractionData<T>> {
    if !(eps > T::zero() && eps <= T::one()) {
        return Err(Error::Domain(format!("contraction radius {eps} outside (0, 1]")));
    }
    let r = kak(g)?.gap_ratio();
    Ok(ContractionData { lipschitz_bound: r / (eps * eps), image_radius: r / eps })
}
