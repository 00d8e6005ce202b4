//! Acceptance suite. Prints one PASS/FAIL line per criterion part and exits
//! non-zero if any part fails. Runs with `harness = false` so every line
//! reaches the test log.

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use specrad::geometry::{
    delta_hyperplanes, delta_point_hyperplane, delta_points, eigen_moduli, kak, projective_action, spectral_radius,
    wedge_power, ProjHyperplane, ProjPoint, SquareMatrix,
};
use specrad::linalg::{dot, norm, normalized, Dense};
use specrad::measure::{gaussian_sl_measure, notconv_measure, positive_pair_measure};
use specrad::rng::RngStream;
use specrad::stats::{
    clt_report, counterexample_report, delta_tail_at, eigen_clt_covariance, lyapunov_estimate, pilot_lambda,
    ratio_tail_at, regularity_profile, Centering, CltReport, CounterexampleConfig, CounterexampleReport,
    CovarianceReport, Observable, RegularityConfig, TailCurve,
};
use specrad::walk::{run_monte_carlo, stationary_points, Side, WalkConfig};
use specrad::Samples;
use specrad_cli::certify::{certify_batch, random_matrix};

// Tolerances and budgets.
const CERT_TOL: f64 = 1e-10;
const CERT_SIMPLE_GAP: f64 = 1e-8;
const CERT_COUNT: usize = 100_000;
const RUNTIME_BUDGET: Duration = Duration::from_secs(120);
const METRIC_TOL: f64 = 1e-12;
const GEOMETRY_DRAWS: usize = 10_000;
const CONTRACTION_TOL: f64 = 1e-10;
const COMPOUND_TOL: f64 = 1e-8;
const COMPOUND_DRAWS: usize = 1_000;
const ODD_TOL: f64 = 1e-9;
const KS_MAX: f64 = 0.02;
const SIGMA_AGREEMENT: f64 = 0.05;
const SIGMA_MIN: f64 = 0.05;
const TAIL_EPS: f64 = 1e-3;
const TAIL_MAX: f64 = 0.01;
const NULL_VARIANCE_MAX: f64 = 1e-12;
const PSD_SLACK: f64 = 1e-10;
const SYMMETRY_TOL: f64 = 1e-12;
const EIGEN_CLT_AGREEMENT: f64 = 0.10;
const STD_ERRORS: f64 = 3.0;
const REGULARITY_T: f64 = 1e-3;
const REGULARITY_MAX: f64 = 0.05;

const SEED: u64 = 20_240_611;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

// ---------------------------------------------------------------- shared runs

struct CltRun {
    report: CltReport,
    elapsed: Duration,
    set: Samples,
}

fn clt_run() -> &'static CltRun {
    static RUN: OnceLock<CltRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let start = Instant::now();
        let mu = positive_pair_measure::<f64>();
        let lambda = pilot_lambda(&mu, 1000, 2000, RngStream::new(SEED, 0).fork(1).master, None).unwrap();
        let set = run_monte_carlo(&mu, &WalkConfig::final_only(200, Side::Left), 20_000, SEED, None).unwrap();
        let report = clt_report(&set, Observable::LogSpecrad, Centering::Pilot(lambda)).unwrap();
        CltRun { report, elapsed: start.elapsed(), set }
    })
}

fn tail_run() -> &'static (Vec<TailCurve>, Vec<TailCurve>) {
    static RUN: OnceLock<(Vec<TailCurve>, Vec<TailCurve>)> = OnceLock::new();
    RUN.get_or_init(|| {
        let mu = positive_pair_measure::<f64>();
        let set = run_monte_carlo(&mu, &WalkConfig::new(200, vec![50, 200], Side::Left), 10_000, SEED + 6, None)
            .unwrap();
        let eps = [1e-4, 1e-3, 1e-2, 1e-1, 0.5, 1.0];
        let ratio = [50, 200].iter().map(|&n| ratio_tail_at(&set, n, &eps).unwrap()).collect();
        let delta = [50, 200].iter().map(|&n| delta_tail_at(&set, n, &eps).unwrap()).collect();
        (ratio, delta)
    })
}

fn counterexample_run() -> &'static CounterexampleReport {
    static RUN: OnceLock<CounterexampleReport> = OnceLock::new();
    RUN.get_or_init(|| {
        let cfg = CounterexampleConfig { n: 401, trials: 10_000, seed: SEED + 4, ..Default::default() };
        counterexample_report(&cfg, None).unwrap()
    })
}

fn covariance_runs() -> &'static (CovarianceReport, CovarianceReport) {
    static RUN: OnceLock<(CovarianceReport, CovarianceReport)> = OnceLock::new();
    RUN.get_or_init(|| {
        let d2 = eigen_clt_covariance(&clt_run().set).unwrap();
        let mu3 = gaussian_sl_measure::<f64>(3).unwrap();
        let set3 = run_monte_carlo(&mu3, &WalkConfig::final_only(200, Side::Left), 5_000, SEED + 7, None).unwrap();
        (d2, eigen_clt_covariance(&set3).unwrap())
    })
}

// ---------------------------------------------------------------- helpers

fn unit<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        if let Some(v) = normalized(&g) {
            return v;
        }
    }
}

fn perturbed<R: Rng>(rng: &mut R, v: &[f64], scale: f64) -> Vec<f64> {
    let w: Vec<f64> = v.iter().map(|x| x + scale * rng.sample::<f64, _>(StandardNormal)).collect();
    normalized(&w).unwrap()
}

fn rng(tag: u64) -> rand_chacha::ChaCha8Rng {
    rand_chacha::ChaCha8Rng::seed_from_u64(SEED ^ tag)
}

// ---------------------------------------------------------------- criteria

fn c1_certificate() -> Verdict {
    let start = Instant::now();
    let rep = certify_batch(CERT_COUNT + 1_000, SEED + 1, 6, CERT_TOL, CERT_SIMPLE_GAP);
    let elapsed = start.elapsed();
    let pass = rep.checked >= CERT_COUNT
        && rep.violations.is_empty()
        && rep.numerical_failures.is_empty()
        && elapsed < RUNTIME_BUDGET;
    verdict(
        pass,
        format!(
            "{} invertible checked, {} certified, {} violations, {} numerical failures, min margin {:.3e}, {:.1}s",
            rep.checked,
            rep.certified,
            rep.violations.len(),
            rep.numerical_failures.len(),
            rep.min_margin,
            elapsed.as_secs_f64()
        ),
    )
}

fn c2a_metric() -> Verdict {
    let mut r = rng(0x2a);
    let mut worst = 0.0f64;
    for i in 0..GEOMETRY_DRAWS {
        let d = 2 + i % 5;
        let x = unit(&mut r, d);
        // alternate generic triples with nearly collinear ones
        let (y, z) = if i % 2 == 0 {
            (unit(&mut r, d), unit(&mut r, d))
        } else {
            (perturbed(&mut r, &x, 1e-4), perturbed(&mut r, &x, 1e-4))
        };
        let (px, py, pz) = (ProjPoint::new(&x).unwrap(), ProjPoint::new(&y).unwrap(), ProjPoint::new(&z).unwrap());
        let (hx, hy, hz) = (
            ProjHyperplane::from_normal(&x).unwrap(),
            ProjHyperplane::from_normal(&y).unwrap(),
            ProjHyperplane::from_normal(&z).unwrap(),
        );
        let neg: Vec<f64> = x.iter().map(|v| -2.0 * v).collect();
        let pneg = ProjPoint::new(&neg).unwrap();
        for (dxy, dyz, dxz, dyx, dxx) in [
            (delta_points(&px, &py), delta_points(&py, &pz), delta_points(&px, &pz), delta_points(&py, &px), delta_points(&px, &pneg)),
            (
                delta_hyperplanes(&hx, &hy),
                delta_hyperplanes(&hy, &hz),
                delta_hyperplanes(&hx, &hz),
                delta_hyperplanes(&hy, &hx),
                delta_hyperplanes(&hx, &hx),
            ),
        ] {
            worst = worst
                .max(dxz - dxy - dyz)
                .max((dxy - dyx).abs())
                .max(dxx)
                .max(-dxy.min(dyz).min(dxz))
                .max(dxy - 1.0);
        }
    }
    verdict(worst <= METRIC_TOL, format!("{GEOMETRY_DRAWS} triples of points and of hyperplanes, worst excess {worst:.3e}"))
}

fn c2b_hyperplane_shift() -> Verdict {
    let mut r = rng(0x2b);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..GEOMETRY_DRAWS {
        let d = 2 + i % 5;
        let x = ProjPoint::new(&unit(&mut r, d)).unwrap();
        let f = unit(&mut r, d);
        let f2 = if i % 2 == 0 { unit(&mut r, d) } else { perturbed(&mut r, &f, 1e-3) };
        let (h, h2) = (ProjHyperplane::from_normal(&f).unwrap(), ProjHyperplane::from_normal(&f2).unwrap());
        let lhs = (delta_point_hyperplane(&x, &h) - delta_point_hyperplane(&x, &h2)).abs();
        worst = worst.max(lhs - 2f64.sqrt() * delta_hyperplanes(&h, &h2));
    }
    verdict(worst <= METRIC_TOL, format!("{GEOMETRY_DRAWS} samples, max of lhs - √2·δ(H,H') = {worst:.3e}"))
}

fn c2c_contraction() -> Verdict {
    let mut r = rng(0x2c);
    let (mut draws, mut index) = (0usize, 0u64);
    let mut fails = [0usize; 3];
    while draws < GEOMETRY_DRAWS {
        index += 1;
        let Ok(g) = SquareMatrix::new(random_matrix(SEED + 2, index, 6)) else { continue };
        let dec = kak(&g).unwrap();
        let ratio = dec.gap_ratio();
        if dec.degenerate || 2.0 * ratio.sqrt() > 1.0 {
            continue;
        }
        draws += 1;
        let d = g.dim();
        let lo = 2.0 * ratio.sqrt();
        let eps = lo + (1.0 - lo) * r.random::<f64>();
        let nrm = dec.u.row(0).to_vec();
        let h = ProjHyperplane::from_normal(&nrm).unwrap();
        let vplus = dec.attracting_point();
        let in_u = |r: &mut rand_chacha::ChaCha8Rng| {
            // s n + sqrt(1 - s²) w with w ⊥ n, so δ(x, H) = s > ε
            let s = eps + (1.0 - eps) * r.random_range(f64::EPSILON..1.0);
            let mut w = unit(r, d);
            let c = dot(&w, &nrm);
            w.iter_mut().zip(&nrm).for_each(|(wi, ni)| *wi -= c * ni);
            let w = normalized(&w).unwrap_or_else(|| vec![0.0; d]);
            let x: Vec<f64> = nrm.iter().zip(&w).map(|(n, w)| s * n + (1.0 - s * s).max(0.0).sqrt() * w).collect();
            ProjPoint::new(&x).unwrap()
        };
        let (x, y) = (in_u(&mut r), in_u(&mut r));
        let a1 = dec.a[0];

        // ii: g·U_ε ⊂ closed ball of radius r_ii around v⁺, and r_ii < ratio/ε
        let r_ii = (1.0 + (eps / ratio).powi(2)).powf(-0.5);
        let dist = delta_points(&projective_action(&g, &x), &vplus);
        if dist > r_ii * (1.0 + CONTRACTION_TOL) + CONTRACTION_TOL || r_ii >= ratio / eps {
            fails[0] += 1;
        }
        // iii: δ(x,H)² <= (|gx|/|g||x|)² <= δ(x,H)² + ratio², and |gx|/|g| >= ε on U_ε
        let dxh = delta_point_hyperplane(&x, &h);
        let q = norm(&g.mul_vec(x.vec())) / a1;
        if q * q < dxh * dxh - CONTRACTION_TOL || q * q > dxh * dxh + ratio * ratio + CONTRACTION_TOL || q < eps - CONTRACTION_TOL
        {
            fails[1] += 1;
        }
        // iv: Lipschitz constant ratio/ε² on U_ε
        let dxy = delta_points(&x, &y);
        let dg = delta_points(&projective_action(&g, &x), &projective_action(&g, &y));
        if dg > ratio / (eps * eps) * dxy * (1.0 + CONTRACTION_TOL) + CONTRACTION_TOL {
            fails[2] += 1;
        }
    }
    verdict(
        fails.iter().all(|&f| f == 0),
        format!("{draws} (g, ε, x, y) draws, failures ii/iii/iv = {}/{}/{}", fails[0], fails[1], fails[2]),
    )
}

fn c3_compound() -> Verdict {
    let mut r = rng(0x3);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < COMPOUND_DRAWS {
        let d = r.random_range(2..=6);
        let data: Vec<f64> = (0..d * d).map(|_| r.sample(StandardNormal)).collect();
        let Ok(g) = SquareMatrix::new(Dense::from_row_major(d, data)) else { continue };
        done += 1;
        let moduli = eigen_moduli(&g).unwrap();
        let a = kak(&g).unwrap().a;
        for p in 1..=d {
            let w = wedge_power(&g, p).unwrap();
            let rho: f64 = moduli[..p].iter().product();
            let sv: f64 = a[..p].iter().product();
            worst = worst.max((spectral_radius(&w).unwrap() - rho).abs() / rho);
            worst = worst.max((w.operator_norm() - sv).abs() / sv);
        }
    }
    verdict(worst <= COMPOUND_TOL, format!("{COMPOUND_DRAWS} matrices, all p, worst relative error {worst:.3e}"))
}

fn c4a_odd() -> Verdict {
    let r = counterexample_run();
    verdict(
        r.odd_max_abs_log_specrad < ODD_TOL,
        format!("{} paths × {} odd checkpoints, max |ln ρ| = {:.3e}", r.config.trials, r.odd_checkpoints, r.odd_max_abs_log_specrad),
    )
}

fn c4b_recovered_walk() -> Verdict {
    let r = counterexample_run();
    verdict(
        r.abs_mismatches == 0 && r.signed_mismatches == 0,
        format!(
            "{} mismatches of |S|, {} of signed S, max distance to an integer {:.3e}",
            r.abs_mismatches, r.signed_mismatches, r.max_integer_residual
        ),
    )
}

fn c4c_ks() -> Verdict {
    let r = counterexample_run();
    verdict(r.ks_distance < KS_MAX, format!("KS at k = {} vs 10^5 |N(0, 0.5)| draws = {:.4} (need < {KS_MAX})", r.k, r.ks_distance))
}

fn c5a_ks_channels() -> Verdict {
    let c = &clt_run().report;
    verdict(c.ks_norm_vs_specrad < KS_MAX, format!("two-sample KS = {:.4} (need < {KS_MAX})", c.ks_norm_vs_specrad))
}

fn c5b_sigma_agree() -> Verdict {
    let c = &clt_run().report;
    let rel = c.sigma_relative_difference();
    verdict(
        rel < SIGMA_AGREEMENT,
        format!("σ̂ specrad {:.5}, σ̂ norm {:.5}, relative difference {:.4}", c.sigma_hat, c.sigma_hat_other, rel),
    )
}

fn c5c_sigma_positive() -> Verdict {
    let c = &clt_run().report;
    verdict(c.sigma_hat > SIGMA_MIN, format!("σ̂ = {:.5} (need > {SIGMA_MIN}), λ̂ = {:.5}", c.sigma_hat, c.lambda_hat))
}

fn c5d_runtime() -> Verdict {
    let t = clt_run().elapsed;
    verdict(t < RUNTIME_BUDGET, format!("pilot + 2·10^4 trials at n = 200 in {:.1}s", t.as_secs_f64()))
}

fn c6a_ratio_tail() -> Verdict {
    let p = tail_run().0[1].prob_at(TAIL_EPS).unwrap();
    verdict(p < TAIL_MAX, format!("P̂(ρ/|L_200| <= 1e-3) = {p}"))
}

fn c6b_delta_tail() -> Verdict {
    let p = tail_run().1[1].prob_at(TAIL_EPS).unwrap();
    verdict(p < TAIL_MAX, format!("P̂(δ_200 <= 1e-3) = {p}"))
}

fn c6c_monotone() -> Verdict {
    let (ratio, delta) = tail_run();
    let ok = ratio.iter().chain(delta).all(TailCurve::is_monotone);
    verdict(ok, format!("{} curves over ε ∈ {:?}", ratio.len() + delta.len(), ratio[0].epsilons))
}

fn c6d_decreasing() -> Verdict {
    let (ratio, delta) = tail_run();
    let mut parts = vec![];
    let mut ok = true;
    for (name, curves) in [("ratio", ratio), ("delta", delta)] {
        let i = curves[0].epsilons.iter().position(|&e| e == TAIL_EPS).unwrap();
        let (p50, p200) = (curves[0].probs[i], curves[1].probs[i]);
        let band = curves[0].half_widths()[i] + curves[1].half_widths()[i];
        ok &= p200 <= p50 + band;
        parts.push(format!("{name}: {p50} -> {p200} (band {band:.2e})"));
    }
    verdict(ok, parts.join(", "))
}

fn c7a_null_direction() -> Verdict {
    let (d2, d3) = covariance_runs();
    verdict(
        d2.null_direction_variance <= NULL_VARIANCE_MAX && d3.null_direction_variance <= NULL_VARIANCE_MAX,
        format!("d=2: {:.3e}, d=3: {:.3e}", d2.null_direction_variance, d3.null_direction_variance),
    )
}

fn c7b_psd() -> Verdict {
    let (d2, d3) = covariance_runs();
    let ok = [d2, d3].iter().all(|r| r.is_psd(PSD_SLACK) && r.is_symmetric(SYMMETRY_TOL));
    verdict(ok, format!("eigenvalues d=2 {:?}, d=3 {:?}", d2.eigenvalues, d3.eigenvalues))
}

fn c7c_matches_sigma() -> Verdict {
    let (d2, _) = covariance_runs();
    let target = 2.0 * clt_run().report.sigma_hat.powi(2);
    let top = d2.eigenvalues[0];
    let rel = (top - target).abs() / target;
    verdict(rel <= EIGEN_CLT_AGREEMENT, format!("top eigenvalue {top:.6e} vs 2σ̂² = {target:.6e}, relative {rel:.4}"))
}

fn c8a_simple_top() -> Verdict {
    let set = run_monte_carlo(&positive_pair_measure::<f64>(), &WalkConfig::final_only(400, Side::Left), 1000, SEED + 8, None)
        .unwrap();
    let est = lyapunov_estimate(&set).unwrap();
    let (gap, se) = est.gap(0).unwrap();
    verdict(gap > STD_ERRORS * se, format!("λ̂ = {:?}, λ̂₁ - λ̂₂ = {gap:.5} ± {se:.2e}", est.lambdas))
}

fn c8b_notconv_zero() -> Verdict {
    let mu = notconv_measure::<f64>(2.0, 0.5).unwrap();
    let set = run_monte_carlo(&mu, &WalkConfig::final_only(400, Side::Left), 1000, SEED + 9, None).unwrap();
    let est = lyapunov_estimate(&set).unwrap();
    let (l, se) = (est.lambdas[0], est.std_errors[0]);
    verdict(l.abs() < STD_ERRORS * se, format!("λ̂₁ = {l:.5} ± {se:.2e} ({:.1} standard errors)", l.abs() / se))
}

fn regularity_run() -> &'static specrad::stats::RegularityProfile {
    static RUN: OnceLock<specrad::stats::RegularityProfile> = OnceLock::new();
    RUN.get_or_init(|| {
        let mu = positive_pair_measure::<f64>();
        let x0 = ProjPoint::new(&[1.0, 1.5]).unwrap();
        let pts = stationary_points(&mu, &x0, 200, 10_000, RngStream::new(SEED + 10, 0), None).unwrap();
        let cfg = RegularityConfig {
            t_grid: vec![1e-5, 1e-4, 1e-3, 1e-2, 0.03, 0.1, 0.3, 1.0],
            random_normals: 1000,
            adaptive_points: 256,
            seed: SEED + 11,
        };
        regularity_profile(&pts, &cfg).unwrap()
    })
}

fn c9a_regularity() -> Verdict {
    let p = regularity_run();
    let v = p.prob_at(REGULARITY_T).unwrap();
    verdict(
        v < REGULARITY_MAX && p.hyperplanes_sampled >= 1000 && p.points >= 10_000,
        format!("sup_H ν̂(δ <= 1e-3) = {v} over {} hyperplanes, {} points", p.hyperplanes_sampled, p.points),
    )
}

fn c9b_monotone() -> Verdict {
    let p = regularity_run();
    verdict(p.is_monotone(), format!("profile {:?}", p.sup_probs))
}

fn run_cli(dir: &Path, args: &[&str], threads: usize) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_specrad"))
        .args(args)
        .arg("--threads")
        .arg(threads.to_string())
        .arg("--out")
        .arg(dir)
        .output()
        .map_err(|e| e.to_string())?;
    if status.status.code() != Some(0) {
        return Err(format!("{args:?} exited {:?}: {}", status.status.code(), String::from_utf8_lossy(&status.stderr)));
    }
    Ok(())
}

fn read_dir(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn c10_reproducible() -> Verdict {
    let root = tempfile::tempdir().unwrap();
    let config = root.path().join("config.json");
    std::fs::write(
        &config,
        r#"{
            "n": 60, "trials": 1000, "checkpoints": [20, 40, 60],
            "clt": {"pilot_n": 120, "pilot_trials": 300},
            "regularity": {"points": 1000, "burn_in": 60, "random_normals": 100, "adaptive_points": 32},
            "decay": {"n_grid": [10, 20, 40]},
            "counterexample": {"reference_draws": 5000},
            "certify": {"max_dim": 6}
        }"#,
    )
    .unwrap();
    let matrix = root.path().join("g.json");
    std::fs::write(&matrix, "[[2, 1, 0], [0, 1, 1], [1, 0, 3]]").unwrap();
    let cfg = config.to_str().unwrap();
    let m = matrix.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["certify", m],
        vec!["certify", "--batch", "3000"],
        vec!["simulate"],
        vec!["clt"],
        vec!["ratio"],
        vec!["delta"],
        vec!["lyapunov"],
        vec!["eigen-clt"],
        vec!["regularity"],
        vec!["decay", "--item", "4"],
        vec!["counterexample", "--n", "41"],
    ];
    let mut compared = 0;
    for (ci, cmd) in commands.iter().enumerate() {
        let mut outputs = vec![];
        for threads in [1, 4, 16] {
            let dir = root.path().join(format!("c{ci}_t{threads}"));
            let mut args = cmd.clone();
            args.extend(["--config", cfg, "--seed", "7"]);
            if let Err(e) = run_cli(&dir, &args, threads) {
                return verdict(false, e);
            }
            outputs.push(read_dir(&dir));
        }
        if outputs[0].is_empty() || outputs[1] != outputs[0] || outputs[2] != outputs[0] {
            return verdict(false, format!("{cmd:?}: artifacts differ across 1/4/16 threads"));
        }
        compared += outputs[0].len();
    }
    verdict(true, format!("{} invocations, {compared} artifacts byte-identical across 1, 4 and 16 threads", commands.len()))
}

fn main() {
    let checks: &[(&str, &str, fn() -> Verdict)] = &[
        ("1", "certificate bound and simple top eigenvalue", c1_certificate),
        ("2a", "sine metric axioms and triangle inequality", c2a_metric),
        ("2b", "hyperplane shift inequality", c2b_hyperplane_shift),
        ("2c", "contraction bounds ii-iv", c2c_contraction),
        ("3", "compound power identities", c3_compound),
        ("4a", "counterexample: odd times have ρ = 1", c4a_odd),
        ("4b", "counterexample: recovered walk is exact", c4b_recovered_walk),
        ("4c", "counterexample: KS vs folded Gaussian", c4c_ks),
        ("5a", "CLT: norm and spectral radius channels agree (KS)", c5a_ks_channels),
        ("5b", "CLT: σ̂ channels within 5%", c5b_sigma_agree),
        ("5c", "CLT: σ̂ non-degenerate", c5c_sigma_positive),
        ("5d", "CLT: runtime", c5d_runtime),
        ("6a", "ratio tail at 1e-3", c6a_ratio_tail),
        ("6b", "δ_n tail at 1e-3", c6b_delta_tail),
        ("6c", "tail curves monotone in ε", c6c_monotone),
        ("6d", "tails decrease from n = 50 to n = 200", c6d_decreasing),
        ("7a", "eigenvalue CLT: null direction variance", c7a_null_direction),
        ("7b", "eigenvalue CLT: K̂ symmetric PSD", c7b_psd),
        ("7c", "eigenvalue CLT: d = 2 eigenvalue vs 2σ̂²", c7c_matches_sigma),
        ("8a", "Lyapunov: simple top exponent", c8a_simple_top),
        ("8b", "Lyapunov: notconv exponent is zero", c8b_notconv_zero),
        ("9a", "regularity profile at 1e-3", c9a_regularity),
        ("9b", "regularity profile monotone", c9b_monotone),
        ("10", "byte-identical artifacts across thread counts", c10_reproducible),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = vec![];
    for (id, what, check) in checks {
        let start = Instant::now();
        let v = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            verdict(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("{tag} {id:<3} {what}: {} [{:.1}s]", v.detail, start.elapsed().as_secs_f64());
        if !v.pass {
            failed.push(*id);
        }
    }
    println!("acceptance: {} passed, {} failed {:?}", checks.len() - failed.len(), failed.len(), failed);
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
