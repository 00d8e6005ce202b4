//! Spectral radius of random matrix products.
//!
//! * [`geometry`]: KAK decomposition, projective sine metric, attracting
//!   points and repelling hyperplanes, exterior powers, eigenvalue moduli, and
//!   the proximality certificate `ρ(g)/|g| >= δ(v_g^+, H_g^-)/2`.
//! * [`measure`]: finite-support and sampled measures on `GL_d(R)`.
//! * [`walk`]: renormalized left/right walks and deterministic parallel
//!   Monte Carlo.
//! * [`stats`]: Lyapunov spectra, central limit checks, ratio and `δ_n`
//!   tails, stationary-measure regularity and the decay estimates.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix `f64`, which is what the statistics are calibrated for.

pub mod error;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod measure;
pub mod rng;
pub mod scalar;
pub mod stats;
pub mod walk;

pub use error::{Error, Result};
pub use geometry::{
    CartanVector, JordanVector, KakDecomposition, ProjHyperplane, ProjPoint, ProximalityCertificate, SquareMatrix,
};
pub use measure::{MatrixMeasure, MeasureFlags, MeasureSpec};
pub use rng::RngStream;
pub use scalar::Real;
pub use walk::{SampleSet, Side, WalkConfig, WalkSample, WalkState};

pub type Matrix = SquareMatrix<f64>;
pub type Matrix32 = SquareMatrix<f32>;
pub type Point = ProjPoint<f64>;
pub type Hyperplane = ProjHyperplane<f64>;
pub type Kak = KakDecomposition<f64>;
pub type Measure = MatrixMeasure<f64>;
pub type Measure32 = MatrixMeasure<f32>;
pub type State = WalkState<f64>;
pub type Sample = WalkSample<f64>;
pub type Samples = SampleSet<f64>;
