//! Experiment configuration: one JSON document, overridden by flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use specrad::measure::{EnsembleSpec, MeasureSpec};
use specrad::stats::{DecayItem, Observable};
use specrad::walk::Side;

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    #[default]
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CltOptions {
    pub observable: Observable,
    /// Center with the in-sample `λ̂` instead of a pilot run.
    pub in_sample: bool,
    pub pilot_n: usize,
    pub pilot_trials: usize,
}

impl Default for CltOptions {
    fn default() -> Self {
        Self { observable: Observable::LogSpecrad, in_sample: false, pilot_n: 1000, pilot_trials: 2000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegularityOptions {
    /// Number of stationary draws.
    pub points: usize,
    /// Steps of the right walk per stationary draw.
    pub burn_in: usize,
    pub random_normals: usize,
    pub adaptive_points: usize,
}

impl Default for RegularityOptions {
    fn default() -> Self {
        Self { points: 10_000, burn_in: 200, random_normals: 1000, adaptive_points: 256 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecayOptions {
    pub item: DecayItem,
    pub n_grid: Vec<usize>,
    pub rate: Option<f64>,
    pub grid_points: usize,
    pub horizon: Option<usize>,
}

impl Default for DecayOptions {
    fn default() -> Self {
        Self { item: DecayItem::PairContraction, n_grid: vec![25, 50, 100, 200], rate: None, grid_points: 8, horizon: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CounterexampleOptions {
    pub lambda: f64,
    pub theta: f64,
    pub reference_draws: usize,
    pub ks_threshold: f64,
}

impl Default for CounterexampleOptions {
    fn default() -> Self {
        Self { lambda: 2.0, theta: 0.5, reference_draws: 100_000, ks_threshold: 0.02 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CertifyOptions {
    pub batch: Option<usize>,
    pub max_dim: usize,
    pub tolerance: f64,
    pub simple_gap: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self { batch: None, max_dim: 6, tolerance: 1e-10, simple_gap: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub measure: MeasureSpec,
    pub n: usize,
    /// Defaults to `[n]`.
    pub checkpoints: Option<Vec<usize>>,
    pub trials: usize,
    pub master_seed: u64,
    pub side: Side,
    pub eps_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    /// Runtime placement; never echoed into artifacts.
    #[serde(skip_serializing)]
    pub threads: Option<usize>,
    /// Runtime placement; never echoed into artifacts.
    #[serde(skip_serializing)]
    pub out_dir: Option<PathBuf>,
    pub format: Format,
    pub clt: CltOptions,
    pub regularity: RegularityOptions,
    pub decay: DecayOptions,
    pub counterexample: CounterexampleOptions,
    pub certify: CertifyOptions,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            measure: MeasureSpec::default(),
            n: 200,
            checkpoints: None,
            trials: 10_000,
            master_seed: 0,
            side: Side::Left,
            eps_grid: vec![1e-4, 1e-3, 1e-2, 1e-1, 0.5, 1.0],
            t_grid: vec![1e-4, 1e-3, 1e-2, 0.03, 0.1, 0.3, 1.0],
            threads: None,
            out_dir: None,
            format: Format::Both,
            clt: CltOptions::default(),
            regularity: RegularityOptions::default(),
            decay: DecayOptions::default(),
            counterexample: CounterexampleOptions::default(),
            certify: CertifyOptions::default(),
        }
    }
}

/// Flag values that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub n: Option<usize>,
    pub trials: Option<usize>,
    pub lambda: Option<f64>,
    pub theta: Option<f64>,
}

impl ExperimentConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Failure::Config(format!("reading {}: {e}", p.display())))?;
                Self::from_json(&text)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self, Failure> {
        serde_json::from_str(text).map_err(|e| Failure::Config(format!("config: {e}")))
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(s) = o.seed {
            self.master_seed = s;
        }
        if o.threads.is_some() {
            self.threads = o.threads;
        }
        if o.out.is_some() {
            self.out_dir = o.out.clone();
        }
        if let Some(f) = o.format {
            self.format = f;
        }
        if let Some(n) = o.n {
            self.n = n;
            self.checkpoints = None;
        }
        if let Some(t) = o.trials {
            self.trials = t;
        }
        if let Some(l) = o.lambda {
            self.counterexample.lambda = l;
        }
        if let Some(t) = o.theta {
            self.counterexample.theta = t;
        }
        if let MeasureSpec::Ensemble(EnsembleSpec::Notconv { lambda, theta }) = &mut self.measure {
            if let Some(l) = o.lambda {
                *lambda = l;
            }
            if let Some(t) = o.theta {
                *theta = t;
            }
        }
    }

    pub fn checkpoints(&self) -> Vec<usize> {
        self.checkpoints.clone().unwrap_or_else(|| vec![self.n])
    }

    pub fn validate(&self) -> Result<(), Failure> {
        let bad = |m: &str| Err(Failure::Config(m.to_string()));
        if self.n == 0 || self.trials == 0 {
            return bad("n and trials must be positive");
        }
        if self.threads == Some(0) {
            return bad("threads must be positive");
        }
        let cps = self.checkpoints();
        if cps.is_empty() || cps[0] == 0 || !cps.windows(2).all(|w| w[0] < w[1]) || *cps.last().unwrap() > self.n {
            return bad("checkpoints must be strictly increasing within [1, n]");
        }
        for (name, g, upper) in [("eps_grid", &self.eps_grid, f64::INFINITY), ("t_grid", &self.t_grid, 1.0)] {
            if g.is_empty() || !g.iter().all(|x| *x > 0.0 && *x <= upper) || !g.windows(2).all(|w| w[0] < w[1]) {
                return Err(Failure::Config(format!("{name} must be positive, strictly ascending and nonempty")));
            }
        }
        let dg = &self.decay.n_grid;
        if dg.is_empty() || dg[0] == 0 || !dg.windows(2).all(|w| w[0] < w[1]) {
            return bad("decay.n_grid must be positive and strictly ascending");
        }
        if self.regularity.points == 0 || self.regularity.burn_in == 0 || self.clt.pilot_n == 0 || self.clt.pilot_trials == 0 {
            return bad("regularity and pilot counts must be positive");
        }
        if self.certify.max_dim < 2 {
            return bad("certify.max_dim must be at least 2");
        }
        Ok(())
    }

    /// The artifact echo: everything except runtime placement.
    pub fn echo_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes") + "\n"
    }

    /// SHA-256 of the compact echo.
    pub fn hash(&self) -> String {
        let compact = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(compact.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out_dir.clone().unwrap_or_else(|| PathBuf::from("out"))
    }
}
