//! One function per subcommand. Each computes everything in memory and
//! returns the artifacts; nothing touches the disk here.

use serde::Serialize;
use serde_json::{json, Value};
use specrad::geometry::{ProjPoint, SquareMatrix};
use specrad::io::{columns_csv, format_float, samples_csv};
use specrad::rng::RngStream;
use specrad::stats::{
    clt_report, counterexample_report, decay_suite, delta_tail_at, eigen_clt_covariance, lyapunov_estimate,
    pilot_lambda, ratio_tail_at, regularity_profile, Centering, CounterexampleConfig, DecayConfig, RegularityConfig,
    TailCurve,
};
use specrad::walk::{run_monte_carlo, stationary_points, Side, WalkConfig};
use specrad::{Measure, Samples};

use crate::certify::{certify, certify_batch};
use crate::config::ExperimentConfig;
use crate::{from_core, Failure};

/// Fork tags for auxiliary random streams.
const PILOT_TAG: u64 = 1;
const STATIONARY_TAG: u64 = 2;
const HYPERPLANE_TAG: u64 = 3;

/// What a command produced.
#[derive(Debug, Default)]
pub struct Outcome {
    /// `(file name, contents)`
    pub artifacts: Vec<(String, String)>,
    pub summary: Vec<(String, String)>,
    /// Exact-class check that failed (exit 4).
    pub invariant_failure: Option<String>,
    /// Certificate contract violated (exit 3).
    pub certificate_failure: Option<String>,
}

impl Outcome {
    fn row(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    fn fail_if(&mut self, bad: bool, what: impl FnOnce() -> String) {
        if bad && self.invariant_failure.is_none() {
            self.invariant_failure = Some(what());
        }
    }
}

fn f(x: f64) -> String {
    format_float(x)
}

fn envelope<R: Serialize>(command: &str, cfg: &ExperimentConfig, report: &R) -> Result<String, Failure> {
    let seeds = json!({
        "master_seed": cfg.master_seed,
        "scheme": "trial t draws from ChaCha8 stream (master_seed, t); auxiliary runs use forked families",
        "forks": { "pilot": PILOT_TAG, "stationary": STATIONARY_TAG, "hyperplanes": HYPERPLANE_TAG },
    });
    let doc = json!({
        "command": command,
        "config_hash": cfg.hash(),
        "seed_lineage": seeds,
        "config": serde_json::to_value(cfg).map_err(|e| Failure::Numerical(e.to_string()))?,
        "report": serde_json::to_value(report).map_err(|e| Failure::Numerical(e.to_string()))?,
    });
    specrad::io::to_json(&doc).map_err(from_core)
}

fn emit<R: Serialize>(out: &mut Outcome, cfg: &ExperimentConfig, command: &str, report: &R, csv: Option<String>) -> Result<(), Failure> {
    if cfg.format.json() {
        out.artifacts.push((format!("{command}.json"), envelope(command, cfg, report)?));
    }
    if let (true, Some(c)) = (cfg.format.csv(), csv) {
        out.artifacts.push((format!("{command}.csv"), c));
    }
    out.artifacts.push((format!("{command}.config.json"), cfg.echo_json()));
    Ok(())
}

fn measure(cfg: &ExperimentConfig) -> Result<Measure, Failure> {
    cfg.measure.build::<f64>().map_err(|e| Failure::Config(format!("measure: {e}")))
}

fn walk(cfg: &ExperimentConfig, mu: &Measure, checkpoints: Vec<usize>, side: Side) -> Result<Samples, Failure> {
    let wc = WalkConfig::new(cfg.n, checkpoints, side);
    run_monte_carlo(mu, &wc, cfg.trials, cfg.master_seed, cfg.threads).map_err(from_core)
}

fn fork_seed(cfg: &ExperimentConfig, tag: u64) -> u64 {
    RngStream::new(cfg.master_seed, 0).fork(tag).master
}

pub fn simulate(cfg: &ExperimentConfig) -> Result<Outcome, Failure> {
    let mu = measure(cfg)?;
    let set = walk(cfg, &mu, cfg.checkpoints(), cfg.side)?;
    let mut out = Outcome::default();
    let unimodular = mu.is_unimodular();
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for s in set.samples.iter().flatten() {
        worst.0 = worst.0.max(s.log_specrad - s.log_norm);
        worst.1 = worst.1.max((s.cartan.values()[0] - s.log_norm).abs()).max((s.jordan.values()[0] - s.log_specrad).abs());
        if unimodular {
            worst.2 = worst.2.max(s.cartan.sum().abs()).max(s.jordan.sum().abs());
        }
    }
    out.fail_if(worst.0 > 1e-9, || format!("log ρ exceeds log |L_n| by {:e}", worst.0));
    out.fail_if(worst.1 > 1e-9, || format!("top Cartan/Jordan entry off by {:e}", worst.1));
    out.fail_if(worst.2 > 1e-7, || format!("determinant-one sums off by {:e}", worst.2));
    let fin = set.final_samples().map_err(from_core)?;
    let n = set.final_n().unwrap_or(0) as f64;
    let mean = fin.iter().map(|s| s.log_norm).sum::<f64>() / fin.len() as f64 / n;
    out.row("measure", mu.describe());
    out.row("trials", cfg.trials);
    out.row("checkpoints", set.config.checkpoints.len());
    out.row("mean log|L_n|/n", f(mean));
    out.row("max log ρ - log|L_n|", f(worst.0));
    emit(&mut out, cfg, "simulate", &set, Some(samples_csv(&set)))?;
    Ok(out)
}

pub fn clt(cfg: &ExperimentConfig) -> Result<Outcome, Failure> {
    let mu = measure(cfg)?;
    let set = walk(cfg, &mu, vec![cfg.n], Side::Left)?;
    let centering = if cfg.clt.in_sample {
        Centering::InSample
    } else {
        let seed = fork_seed(cfg, PILOT_TAG);
        Centering::Pilot(pilot_lambda(&mu, cfg.clt.pilot_n, cfg.clt.pilot_trials, seed, cfg.threads).map_err(from_core)?)
    };
    let rep = clt_report(&set, cfg.clt.observable, centering).map_err(from_core)?;
    let mut out = Outcome::default();
    out.row("lambda_hat", f(rep.lambda_hat));
    out.row("sigma_hat", f(rep.sigma_hat));
    out.row("sigma_hat (other channel)", f(rep.sigma_hat_other));
    out.row("KS vs N(0, sigma_hat^2)", f(rep.ks_vs_gaussian));
    out.row("KS norm vs spectral radius", f(rep.ks_norm_vs_specrad));
    let csv = columns_csv(&[("normalized", rep.normalized_samples.clone())]).map_err(from_core)?;
    emit(&mut out, cfg, "clt", &rep, Some(csv))?;
    Ok(out)
}

fn tails_csv(curves: &[TailCurve]) -> String {
    let mut s = String::from("n,epsilon,prob,lower,upper\n");
    for c in curves {
        for i in 0..c.epsilons.len() {
            s.push_str(&format!("{},{},{},{},{}\n", c.n, f(c.epsilons[i]), f(c.probs[i]), f(c.lower[i]), f(c.upper[i])));
        }
    }
    s
}

fn tails(cfg: &ExperimentConfig, command: &str, delta: bool) -> Result<Outcome, Failure> {
    let mu = measure(cfg)?;
    let set = walk(cfg, &mu, cfg.checkpoints(), cfg.side)?;
    let curves = set
        .config
        .checkpoints
        .iter()
        .map(|&n| if delta { delta_tail_at(&set, n, &cfg.eps_grid) } else { ratio_tail_at(&set, n, &cfg.eps_grid) })
        .collect::<specrad::Result<Vec<_>>>()
        .map_err(from_core)?;
    let mut out = Outcome::default();
    for c in &curves {
        out.fail_if(!c.is_monotone(), || format!("tail curve at n = {} is not monotone", c.n));
    }
    let last = curves.last().expect("validated checkpoints");
    for (e, p) in last.epsilons.iter().zip(&last.probs) {
        out.row(&format!("P(· <= {}) at n = {}", f(*e), last.n), f(*p));
    }
    emit(&mut out, cfg, command, &curves, Some(tails_csv(&curves)))?;
    Ok(out)
}

pub fn ratio(cfg: &ExperimentConfig) -> Result<Outcome, Failure> {
    tails(cfg, "ratio", false)
}

pub fn delta(cfg: &ExperimentConfig) -> Result<Outcome, Failure> {
    tails(cfg, "delta", true)
}

pub fn lyapunov(cfg: &ExperimentConfig) -> Result<Outcome, Failure> {
    let mu = measure(cfg)?;
    let set = walk(cfg, &mu, vec![cfg.n], Side::Left)?;
    let est = lyapunov_estimate(&set).map_err(from_core)?;
    let mut out = Outcome::default();
    for (i, (l, s)) in est.lambdas.iter().zip(&est.std_errors).enumerate() {
        out.row(&format!("lambda_{}", i + 1), format!("{} ± {}", f(*l), f(*s)));
    }
    let idx: Vec<f64> = (1..=est.lambdas.len()).map(|i| i as f64).collect();
    let csv = columns_csv(&[("i", idx), ("lambda", est.lambdas.clone()), ("std_error", est.std_errors.clone())])
        .map_err(from_core)?;
    emit(&mut out, cfg, "lyapunov", &est, Some(csv))?;
    Ok(out)
}

pub fn eigen_clt(cfg: &ExperimentConfig) -> Result<Outcome, Failure> {
    let mu = measure(cfg)?;
    let set = walk(cfg, &mu, vec![cfg.n], Side::Left)?;
    let rep = eigen_clt_covariance(&set).map_err(from_core)?;
    let mut out = Outcome::default();
    if mu.is_unimodular() {
        out.fail_if(rep.null_direction_variance > 1e-12, || {
            format!("null-direction variance {:e} above 1e-12", rep.null_direction_variance)
        });
    }
    out.fail_if(!rep.is_symmetric(1e-12), || "covariance is not symmetric".into());
    out.fail_if(!rep.is_psd(1e-10), || "covariance is not positive semidefinite".into());
    out.row("null direction variance", f(rep.null_direction_variance));
    out.row("eigenvalues", rep.eigenvalues.iter().map(|e| f(*e)).collect::<Vec<_>>().join(" "));
    let d = rep.k_hat.len();
    let cols: Vec<(String, Vec<f64>)> = (0..d).map(|j| (format!("k_{}", j + 1), rep.k_hat.iter().map(|r| r[j]).collect())).collect();
    let named: Vec<(&str, Vec<f64>)> = cols.iter().map(|(n, v)| (n.as_str(), v.clone())).collect();
    emit(&mut out, cfg, "eigen-clt", &rep, Some(columns_csv(&named).map_err(from_core)?))?;
    Ok(out)
}

/// A fixed point off every coordinate hyperplane.
fn generic_start(d: usize) -> ProjPoint<f64> {
    let v: Vec<f64> = (0..d).map(|i| 1.0 + 0.5 * i as f64).collect();
    ProjPoint::new(&v).expect("nonzero")
}

pub fn regularity(cfg: &ExperimentConfig) -> Result<Outcome, Failure> {
    let mu = measure(cfg)?;
    let r = &cfg.regularity;
    let stream = RngStream::new(fork_seed(cfg, STATIONARY_TAG), 0);
    let points = stationary_points(&mu, &generic_start(mu.dim()), r.burn_in, r.points, stream, cfg.threads)
        .map_err(from_core)?;
    let rc = RegularityConfig {
        t_grid: cfg.t_grid.clone(),
        random_normals: r.random_normals,
        adaptive_points: r.adaptive_points,
        seed: fork_seed(cfg, HYPERPLANE_TAG),
    };
    let prof = regularity_profile(&points, &rc).map_err(from_core)?;
    let mut out = Outcome::default();
    out.fail_if(!prof.is_monotone(), || "regularity profile is not monotone".into());
    out.row("hyperplanes", prof.hyperplanes_sampled);
    for (t, p) in prof.t_grid.iter().zip(&prof.sup_probs) {
        out.row(&format!("sup_H mass(δ <= {})", f(*t)), f(*p));
    }
    let csv = columns_csv(&[("t", prof.t_grid.clone()), ("sup_prob", prof.sup_probs.clone())]).map_err(from_core)?;
    emit(&mut out, cfg, "regularity", &prof, Some(csv))?;
    Ok(out)
}

pub fn decay(cfg: &ExperimentConfig) -> Result<Outcome, Failure> {
    let mu = measure(cfg)?;
    let d = &cfg.decay;
    let dc = DecayConfig {
        item: d.item,
        n_grid: d.n_grid.clone(),
        trials: cfg.trials,
        seed: cfg.master_seed,
        rate: d.rate,
        grid_points: d.grid_points,
        points: None,
        horizon: d.horizon,
    };
    let curve = decay_suite(&mu, &dc, cfg.threads).map_err(from_core)?;
    let mut out = Outcome::default();
    out.row("item", curve.item.index());
    out.row("rate", f(curve.rate));
    out.row("fitted rate", f(curve.fitted_rate));
    for (n, p) in curve.n_grid.iter().zip(&curve.probs) {
        out.row(&format!("P at n = {n}"), f(*p));
    }
    let csv = columns_csv(&[
        ("n", curve.n_grid.iter().map(|&n| n as f64).collect()),
        ("prob", curve.probs.clone()),
        ("half_width", curve.half_widths.clone()),
        ("worst_median_log", curve.worst_median_log.clone()),
    ])
    .map_err(from_core)?;
    emit(&mut out, cfg, "decay", &curve, Some(csv))?;
    Ok(out)
}

pub fn counterexample(cfg: &ExperimentConfig) -> Result<Outcome, Failure> {
    let c = &cfg.counterexample;
    let cc = CounterexampleConfig {
        lambda: c.lambda,
        theta: c.theta,
        n: cfg.n,
        trials: cfg.trials,
        seed: cfg.master_seed,
        reference_draws: c.reference_draws,
        ks_threshold: c.ks_threshold,
    };
    let rep = counterexample_report(&cc, cfg.threads).map_err(from_core)?;
    let mut out = Outcome::default();
    out.fail_if(!rep.odd_exact, || format!("odd-time |log ρ| reached {:e}", rep.odd_max_abs_log_specrad));
    out.fail_if(!rep.s_exact, || {
        format!("recovered walk mismatches: {} absolute, {} signed", rep.abs_mismatches, rep.signed_mismatches)
    });
    out.row("odd checkpoints exact", rep.odd_exact);
    out.row("max |log ρ(L_odd)|", f(rep.odd_max_abs_log_specrad));
    out.row("recovered S exact", rep.s_exact);
    out.row("KS vs |N(0, 2θ(1-θ))|", f(rep.ks_distance));
    out.row("KS below threshold", rep.ks_pass);
    out.row("Var Y (expected)", format!("{} ({})", f(rep.y_variance), f(rep.y_variance_expected)));
    let csv = columns_csv(&[("normalized_log_specrad", rep.final_values.clone())]).map_err(from_core)?;
    emit(&mut out, cfg, "counterexample", &rep, Some(csv))?;
    Ok(out)
}

pub fn certify_file(cfg: &ExperimentConfig, path: &std::path::Path) -> Result<Outcome, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("reading {}: {e}", path.display())))?;
    let g: SquareMatrix<f64> = serde_json::from_str(&text).map_err(|e| Failure::Config(format!("matrix: {e}")))?;
    let rep = certify(&g, cfg.certify.tolerance, cfg.certify.simple_gap).map_err(from_core)?;
    let mut out = Outcome::default();
    out.row("delta_g", f(rep.delta_g));
    out.row("a_2/a_1", f(rep.gap_ratio));
    match rep.lower_bound {
        Some(b) => out.row("certificate", format!("yes, ρ/|g| >= {}", f(b))),
        None => out.row("certificate", "no certificate (singular gap too small)"),
    }
    out.row("ρ/|g|", f(rep.ratio));
    if let Some(v) = rep.bound_verified {
        out.row("bound verified", v);
    }
    if rep.violated() {
        out.certificate_failure = Some(format!("certificate conclusions fail: {rep:?}"));
    }
    emit(&mut out, cfg, "certify", &rep, None)?;
    Ok(out)
}

pub fn certify_many(cfg: &ExperimentConfig, count: usize) -> Result<Outcome, Failure> {
    let c = &cfg.certify;
    let rep = certify_batch(count, cfg.master_seed, c.max_dim, c.tolerance, c.simple_gap);
    let mut out = Outcome::default();
    out.row("checked", rep.checked);
    out.row("skipped (singular)", rep.skipped_singular);
    out.row("certified", rep.certified);
    out.row("violations", rep.violations.len());
    out.row("min margin", f(rep.min_margin));
    if !rep.violations.is_empty() {
        out.certificate_failure = Some(format!("{} certificate violations", rep.violations.len()));
    }
    if let Some(v) = rep.numerical_failures.first() {
        return Err(Failure::Numerical(format!("matrix {}: {}", v.index, v.detail)));
    }
    let by_dim: Value = rep.certified_by_dim.iter().map(|(d, k)| json!({"dim": d, "certified": k})).collect();
    out.row("certified by dim", by_dim);
    emit(&mut out, cfg, "certify", &rep, None)?;
    Ok(out)
}
