use nalgebra::DMatrix;
use proptest::prelude::*;
use specrad::geometry::{
    delta_point_hyperplane, delta_points, dual_action, eigen_moduli, kak, projective_action, proximality_certificate,
    spectral_radius, wedge_power, ProjHyperplane, ProjPoint, SquareMatrix,
};
use specrad::linalg::{dot, Dense};

fn matrix(max_dim: usize) -> impl Strategy<Value = (usize, Vec<f64>)> {
    (2..=max_dim).prop_flat_map(|d| (Just(d), prop::collection::vec(-3.0f64..3.0, d * d)))
}

fn oracle(d: usize, data: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(d, d, data)
}

fn invertible(d: usize, data: Vec<f64>) -> Option<SquareMatrix<f64>> {
    let m = oracle(d, &data);
    let sv = m.singular_values();
    let (hi, lo) = (sv.max(), sv.min());
    if lo <= 1e-6 * hi {
        return None;
    }
    SquareMatrix::new(Dense::from_row_major(d, data)).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn singular_values_match_oracle((d, data) in matrix(6)) {
        let Some(g) = invertible(d, data.clone()) else { return Ok(()) };
        let dec = kak(&g).unwrap();
        let mut want: Vec<f64> = oracle(d, &data).singular_values().iter().copied().collect();
        want.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (a, b) in dec.a.iter().zip(&want) {
            prop_assert!((a - b).abs() <= 1e-10 * want[0]);
        }
        let back = dec.reconstruct();
        for i in 0..d {
            for j in 0..d {
                prop_assert!((back[(i, j)] - data[i * d + j]).abs() <= 1e-10 * want[0]);
            }
        }
        let ktk = dec.k.transpose().matmul(&dec.k);
        let uut = dec.u.matmul(&dec.u.transpose());
        for i in 0..d {
            for j in 0..d {
                let e = if i == j { 1.0 } else { 0.0 };
                prop_assert!((ktk[(i, j)] - e).abs() < 1e-12);
                prop_assert!((uut[(i, j)] - e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eigen_moduli_match_oracle((d, data) in matrix(6)) {
        let Some(g) = invertible(d, data.clone()) else { return Ok(()) };
        let got = eigen_moduli(&g).unwrap();
        let mut want: Vec<f64> = oracle(d, &data).complex_eigenvalues().iter().map(|z| z.norm()).collect();
        want.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (a, b) in got.iter().zip(&want) {
            prop_assert!((a - b).abs() <= 1e-8 * want[0], "{got:?} vs {want:?}");
        }
        prop_assert!((spectral_radius(&g).unwrap() - want[0]).abs() <= 1e-8 * want[0]);
    }

    #[test]
    fn kak_sign_choice_is_canonical((d, data) in matrix(5)) {
        let Some(g) = invertible(d, data) else { return Ok(()) };
        let a = kak(&g).unwrap();
        let b = kak(&g.scaled(1.0)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn action_is_equivariant((d, data) in matrix(5), v in prop::collection::vec(-1.0f64..1.0, 5)) {
        let Some(g) = invertible(d, data) else { return Ok(()) };
        let Ok(x) = ProjPoint::new(&v[..d]) else { return Ok(()) };
        // x ∈ H implies g·x ∈ g·H
        let mut normal = vec![0.0; d];
        normal[0] = x.vec()[1];
        normal[1] = -x.vec()[0];
        let h = ProjHyperplane::from_normal(&normal).unwrap();
        prop_assert!(delta_point_hyperplane(&x, &h) < 1e-12);
        let gx = projective_action(&g, &x);
        let gh = dual_action(&g, &h);
        prop_assert!(delta_point_hyperplane(&gx, &gh) < 1e-9);
        // g⁻¹·(g·x) = x
        let back = projective_action(&g.inverse(), &gx);
        prop_assert!(delta_points(&back, &x) < 1e-8);
    }

    #[test]
    fn compound_multiplicative((d, data, data2, p) in (2usize..=4).prop_flat_map(|d| (
        Just(d),
        prop::collection::vec(-3.0f64..3.0, d * d),
        prop::collection::vec(-3.0f64..3.0, d * d),
        1..=d,
    ))) {
        let (Some(g), Some(h)) = (invertible(d, data), invertible(d, data2)) else { return Ok(()) };
        let lhs = wedge_power(&g.matmul(&h), p).unwrap();
        let rhs = wedge_power(&g, p).unwrap().matmul(&wedge_power(&h, p).unwrap());
        let scale = lhs.operator_norm();
        for i in 0..lhs.dim() {
            for j in 0..lhs.dim() {
                prop_assert!((lhs.get(i, j) - rhs.get(i, j)).abs() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn certificate_lower_bound_holds((d, data) in matrix(5)) {
        let Some(g) = invertible(d, data) else { return Ok(()) };
        if let Some(cert) = proximality_certificate(&g).unwrap() {
            let ratio = spectral_radius(&g).unwrap() / g.operator_norm();
            prop_assert!(ratio >= cert.lower_bound - 1e-10);
        }
    }
}

#[test]
fn attracting_point_of_diagonal() {
    let g = SquareMatrix::<f64>::diagonal(&[1.0, 5.0, 0.2]);
    let dec = kak(&g).unwrap();
    assert!((dot(dec.attracting_point().vec(), &[0.0, 1.0, 0.0]).abs() - 1.0).abs() < 1e-14);
    assert!((dec.delta() - 1.0).abs() < 1e-14);
    assert!((dec.gap_ratio() - 0.2).abs() < 1e-14);
}

#[test]
fn f32_matches_f64() {
    let rows = vec![vec![2.0, 1.0, 0.5], vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 3.0]];
    let g64 = SquareMatrix::<f64>::from_rows(rows).unwrap();
    let g32: SquareMatrix<f32> = g64.cast();
    let (r64, r32) = (spectral_radius(&g64).unwrap(), spectral_radius(&g32).unwrap());
    assert!((r64 - r32 as f64).abs() < 1e-5 * r64);
    let (a64, a32) = (kak(&g64).unwrap().a, kak(&g32).unwrap().a);
    for (x, y) in a64.iter().zip(&a32) {
        assert!((x - *y as f64).abs() < 1e-5 * a64[0]);
    }
}
