//! Command-line front end: parse the config, run one experiment, write its
//! artifacts atomically, print a summary and map the result to an exit code.
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 2 | config or parse error |
//! | 3 | certificate contract violated |
//! | 4 | exact invariant failed |
//! | 5 | numerical failure |

pub mod certify;
pub mod commands;
pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::commands::Outcome;
use crate::config::{ExperimentConfig, Format, Overrides};

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("config error: {0}")]
    Config(String),
    #[error("certificate violation: {0}")]
    Certificate(String),
    #[error("invariant failure: {0}")]
    Invariant(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) | Failure::Io(_) => 2,
            Failure::Certificate(_) => 3,
            Failure::Invariant(_) => 4,
            Failure::Numerical(_) => 5,
        }
    }
}

pub(crate) fn from_core(e: specrad::Error) -> Failure {
    use specrad::Error as E;
    match e {
        E::Trial { .. } | E::EigenFailure | E::Overflow { .. } | E::NonFinite => Failure::Numerical(e.to_string()),
        E::DegenerateVariance { .. } => Failure::Invariant(e.to_string()),
        _ => Failure::Config(e.to_string()),
    }
}

#[derive(Debug, Parser)]
#[command(name = "specrad", version, about = "Spectral radius of random matrix products: batch experiments")]
pub struct Cli {
    /// JSON experiment config.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Master seed.
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    /// Worker threads; never changes the output.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Artifact directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Walk length.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    #[arg(long, global = true)]
    pub theta: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Proximality certificate of one matrix, or a random batch.
    Certify {
        /// JSON array of rows.
        matrix: Option<PathBuf>,
        #[arg(long)]
        batch: Option<usize>,
    },
    /// Raw walk samples at every checkpoint.
    Simulate,
    /// Central limit check for ln ρ(L_n) against ln |L_n|.
    Clt,
    /// Tail of ρ(L_n)/|L_n|.
    Ratio,
    /// Tail of δ(v⁺, H⁻) of L_n.
    Delta,
    /// Lyapunov spectrum.
    Lyapunov,
    /// Covariance of the eigenvalue-modulus vector.
    EigenClt,
    /// Slab masses of the stationary measure.
    Regularity,
    /// One of the five contraction estimates.
    Decay {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        item: Option<u8>,
    },
    /// The non-strongly-irreducible example.
    Counterexample,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Certify { .. } => "certify",
            Command::Simulate => "simulate",
            Command::Clt => "clt",
            Command::Ratio => "ratio",
            Command::Delta => "delta",
            Command::Lyapunov => "lyapunov",
            Command::EigenClt => "eigen-clt",
            Command::Regularity => "regularity",
            Command::Decay { .. } => "decay",
            Command::Counterexample => "counterexample",
        }
    }
}

/// Loads the config and applies flag overrides.
pub fn resolve_config(cli: &Cli) -> Result<ExperimentConfig, Failure> {
    let mut cfg = ExperimentConfig::load(cli.config.as_deref())?;
    cfg.apply(&Overrides {
        seed: cli.seed,
        threads: cli.threads,
        out: cli.out.clone(),
        format: cli.format,
        n: cli.n,
        trials: cli.trials,
        lambda: cli.lambda,
        theta: cli.theta,
    });
    match &cli.command {
        Command::Decay { item: Some(i) } => {
            cfg.decay.item = specrad::stats::DecayItem::from_index(*i).map_err(from_core)?;
        }
        Command::Certify { batch: Some(b), .. } => cfg.certify.batch = Some(*b),
        _ => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

fn prepare_out_dir(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("creating {}: {e}", dir.display())))?;
    tempfile::NamedTempFile::new_in(dir).map_err(|e| Failure::Io(format!("{} is not writable: {e}", dir.display())))?;
    Ok(())
}

/// Writes each artifact to a temporary file in `dir`, then renames it.
pub fn write_artifacts(dir: &Path, artifacts: &[(String, String)]) -> Result<(), Failure> {
    for (name, contents) in artifacts {
        let io = |e: std::io::Error| Failure::Io(format!("{name}: {e}"));
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
        tmp.write_all(contents.as_bytes()).map_err(io)?;
        tmp.as_file().sync_all().map_err(io)?;
        tmp.persist(dir.join(name)).map_err(|e| io(e.error))?;
    }
    Ok(())
}

/// Runs the command without touching the disk.
pub fn execute(cmd: &Command, cfg: &ExperimentConfig) -> Result<Outcome, Failure> {
    match cmd {
        Command::Certify { matrix: Some(p), batch: None } => commands::certify_file(cfg, p),
        Command::Certify { matrix: None, .. } => match cfg.certify.batch {
            Some(b) if b > 0 => commands::certify_many(cfg, b),
            _ => Err(Failure::Config("certify needs a matrix file or --batch N".into())),
        },
        Command::Certify { .. } => Err(Failure::Config("give either a matrix file or --batch, not both".into())),
        Command::Simulate => commands::simulate(cfg),
        Command::Clt => commands::clt(cfg),
        Command::Ratio => commands::ratio(cfg),
        Command::Delta => commands::delta(cfg),
        Command::Lyapunov => commands::lyapunov(cfg),
        Command::EigenClt => commands::eigen_clt(cfg),
        Command::Regularity => commands::regularity(cfg),
        Command::Decay { .. } => commands::decay(cfg),
        Command::Counterexample => commands::counterexample(cfg),
    }
}

fn print_summary(name: &str, out: &Outcome) {
    let width = out.summary.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    println!("{name}");
    for (k, v) in &out.summary {
        println!("  {k:<width$}  {v}");
    }
}

fn run_cli(cli: &Cli) -> Result<(), Failure> {
    let cfg = resolve_config(cli)?;
    let dir = cfg.out_dir();
    prepare_out_dir(&dir)?;
    let out = execute(&cli.command, &cfg)?;
    write_artifacts(&dir, &out.artifacts)?;
    print_summary(cli.command.name(), &out);
    if let Some(c) = out.certificate_failure {
        return Err(Failure::Certificate(c));
    }
    if let Some(i) = out.invariant_failure {
        return Err(Failure::Invariant(i));
    }
    Ok(())
}

/// Entry point; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run_cli(&cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("specrad {}: {f}", cli.command.name());
            f.exit_code()
        }
    }
}
