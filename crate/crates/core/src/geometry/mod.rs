//! Deterministic linear algebra on `GL_d(R)` and projective geometry of
//! `P(R^d)`: Cartan (KAK) decomposition, sine metric, attracting points and
//! repelling hyperplanes, exterior powers, eigenvalue moduli and the
//! proximality certificate.

mod kak;
mod matrix;
mod projective;
mod proximal;
mod spectrum;
mod wedge;

pub use kak::{attracting_point, kak, repelling_hyperplane, KakDecomposition, DEGENERACY_RATIO};
pub use matrix::{SquareMatrix, INVERTIBILITY_RATIO};
pub use projective::{
    delta_hyperplanes, delta_point_hyperplane, delta_points, dual_action, projective_action, ProjHyperplane,
    ProjPoint,
};
pub use proximal::{
    contraction_data, proximality_certificate, CertificateCheck, ContractionData, ProximalityCertificate,
};
pub use spectrum::{
    cartan_projection, dense_eigen_moduli, eigen_moduli, jordan_projection, spectral_radius, CartanVector,
    JordanVector,
};
pub use wedge::{binomial, compound, wedge_basis, wedge_power, wedge_vectors};
