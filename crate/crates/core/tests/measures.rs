use num_rational::Ratio;
use specrad::geometry::SquareMatrix;
use specrad::measure::{
    gaussian_sl_measure, notconv_atoms, notconv_measure, positive_pair_measure, Atom, MatrixMeasure, MeasureFlags,
    Weight,
};
use specrad::{Error, MeasureSpec, RngStream};

fn m(rows: &[[f64; 2]; 2]) -> SquareMatrix<f64> {
    SquareMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}

fn atom(rows: &[[f64; 2]; 2], weight: Weight) -> Atom<f64> {
    Atom { matrix: m(rows), weight }
}

#[test]
fn exact_weights_must_sum_to_one() {
    let e = |p, q| Weight::Exact(Ratio::new(p, q));
    let bad = MatrixMeasure::finite(
        vec![atom(&[[2.0, 0.0], [0.0, 1.0]], e(1, 2)), atom(&[[1.0, 1.0], [0.0, 1.0]], e(1, 3))],
        MeasureFlags::default(),
    );
    assert!(matches!(bad, Err(Error::Domain(_))));
    let good = MatrixMeasure::finite(
        vec![atom(&[[2.0, 0.0], [0.0, 1.0]], e(1, 3)), atom(&[[1.0, 1.0], [0.0, 1.0]], e(2, 3))],
        MeasureFlags::default(),
    );
    assert!(good.is_ok());
}

#[test]
fn approximate_weights_use_tolerance() {
    let id = [[1.0, 0.0], [0.0, 1.0]];
    let ok = MatrixMeasure::finite(vec![atom(&id, Weight::Approx(0.3)), atom(&id, Weight::Approx(0.7))], Default::default());
    assert!(ok.is_ok());
    let off = MatrixMeasure::finite(vec![atom(&id, Weight::Approx(0.3)), atom(&id, Weight::Approx(0.69))], Default::default());
    assert!(off.is_err());
    let neg = MatrixMeasure::finite(vec![atom(&id, Weight::Approx(-0.5)), atom(&id, Weight::Approx(1.5))], Default::default());
    assert!(neg.is_err());
}

#[test]
fn rejects_mixed_dimensions_and_empty_support() {
    let three = SquareMatrix::<f64>::identity(3);
    let res = MatrixMeasure::uniform(vec![m(&[[1.0, 0.0], [0.0, 1.0]]), three], Default::default());
    assert!(matches!(res, Err(Error::DimensionMismatch { .. })));
    assert!(matches!(MatrixMeasure::<f64>::uniform(vec![], Default::default()), Err(Error::EmptyInput)));
}

#[test]
fn sampling_frequencies_follow_weights() {
    let mu = MatrixMeasure::finite(
        vec![
            atom(&[[2.0, 0.0], [0.0, 0.5]], Weight::Exact(Ratio::new(1, 4))),
            atom(&[[1.0, 1.0], [0.0, 1.0]], Weight::Exact(Ratio::new(3, 4))),
        ],
        Default::default(),
    )
    .unwrap();
    let mut rng = RngStream::new(5, 0).rng();
    let n = 40_000;
    let hits = (0..n).filter(|_| mu.sample(&mut rng).atom == Some(0)).count();
    let p = hits as f64 / n as f64;
    let se = (0.25f64 * 0.75 / n as f64).sqrt();
    assert!((p - 0.25).abs() < 4.0 * se, "{p}");
}

#[test]
fn builtin_ensembles_are_unimodular() {
    let (a, b) = notconv_atoms::<f64>(3.0);
    assert!((a.determinant().abs() - 1.0).abs() < 1e-12);
    assert!((b.determinant().abs() - 1.0).abs() < 1e-12);
    assert!(notconv_measure::<f64>(2.0, 0.5).unwrap().is_unimodular());
    assert!(positive_pair_measure::<f64>().is_unimodular());
    let g = gaussian_sl_measure::<f64>(4).unwrap();
    let mut rng = RngStream::new(1, 0).rng();
    for _ in 0..100 {
        assert!((g.sample(&mut rng).matrix.determinant().abs() - 1.0).abs() < 1e-10);
    }
    assert!(notconv_measure::<f64>(1.0, 0.5).is_err());
    assert!(notconv_measure::<f64>(2.0, 0.0).is_err());
}

#[test]
fn pushforwards_change_dimension_and_atoms() {
    let mu = positive_pair_measure::<f64>();
    let t = mu.transpose_measure();
    for (a, b) in mu.atoms().unwrap().iter().zip(t.atoms().unwrap()) {
        assert_eq!(a.matrix.transpose(), b.matrix);
    }
    let g = gaussian_sl_measure::<f64>(4).unwrap();
    assert_eq!(g.wedge_measure(2).unwrap().dim(), 6);
    assert_eq!(g.wedge_measure(3).unwrap().dim(), 4);
    assert!(g.wedge_measure(0).is_err());
    assert!(g.wedge_measure(5).is_err());
    let mut rng = RngStream::new(2, 0).rng();
    let w = g.wedge_measure(2).unwrap();
    assert!((w.sample(&mut rng).matrix.determinant().abs() - 1.0).abs() < 1e-9);
}

#[test]
fn exact_moment_matches_monte_carlo() {
    let mu = positive_pair_measure::<f64>();
    let exact = mu.moment(2).unwrap();
    let est = mu.moment_estimate(2, 2_000, RngStream::new(3, 0)).unwrap();
    // both atoms have the same singular values, so the estimate has no spread
    assert!((exact.value - est.value).abs() < 1e-12);
    let g = gaussian_sl_measure::<f64>(2).unwrap();
    assert!(matches!(g.moment(1), Err(Error::UnsupportedForSampler(_))));
    let e = g.moment_estimate(1, 4_000, RngStream::new(4, 0)).unwrap();
    assert!(e.value > 0.0 && e.std_error.unwrap() < 0.05 * e.value);
}

#[test]
fn spec_json_parses_atoms_and_ensembles() {
    let spec: MeasureSpec = serde_json::from_str(
        r#"{"dim": 2, "atoms": [
            {"matrix": [[2, 1], [1, 1]], "weight": "1/2"},
            {"matrix": [[1, 1], [1, 2]], "weight": "1/2"}],
            "flags": {"strongly_irreducible": true, "proximal": true}}"#,
    )
    .unwrap();
    let mu = spec.build::<f64>().unwrap();
    assert!(mu.is_finite() && mu.flags().strongly_irreducible && !mu.flags().zariski_dense);
    let e: MeasureSpec = serde_json::from_str(r#"{"ensemble": "gaussian_sl", "dim": 3}"#).unwrap();
    assert_eq!(e.build::<f32>().unwrap().dim(), 3);
    let bad: MeasureSpec = serde_json::from_str(r#"{"dim": 3, "atoms": [{"matrix": [[1, 0], [0, 1]], "weight": 1.0}]}"#).unwrap();
    assert!(bad.build::<f64>().is_err());
}
