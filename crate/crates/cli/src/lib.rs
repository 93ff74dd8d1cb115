//! Command-line front end: configuration, scenario dispatch and artifacts.

pub mod config;
pub mod output;
pub mod scenarios;

use std::io;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::config::{parse_config, ConfigError, RunConfig, Scenario};
use crate::output::{write_diagnostic, Manifest, OutputDir};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "ISOWAVE_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("computation failed: {0}")]
    Compute(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 2 for usage and configuration problems, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Compute(_) | CliError::Io { .. } => 1,
        }
    }
}

impl From<isowave::Error> for CliError {
    fn from(e: isowave::Error) -> Self {
        CliError::Compute(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "isowave", version, about = "Internal-wave kinetics toolkit")]
pub struct Cli {
    /// TOML run configuration; omitted keys take the values printed by `isowave defaults`.
    #[arg(long, short, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides `output` in the config).
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads; defaults to $ISOWAVE_THREADS, then the machine's parallelism.
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
    /// Run on a single thread.
    #[arg(long, global = true)]
    pub deterministic: bool,
    /// Random seed (overrides `seed` in the config).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frequency over the configured grid.
    Dispersion,
    /// Random resonant-triad coefficients.
    Triads {
        #[command(subcommand)]
        action: TriadsAction,
    },
    /// Collision integral.
    Collision {
        #[command(subcommand)]
        action: CollisionAction,
    },
    /// Stationarity residual over a lattice of power-law exponents.
    ExponentScan,
    /// Rate sensitivity to the integration cutoffs.
    Locality,
    /// Time integration of the kinetic equation.
    Evolve,
    /// Garrett-Munk spectrum against the stationary power law.
    Gm {
        #[command(subcommand)]
        action: GmAction,
    },
    /// Hamiltonian model integration.
    Hamlab {
        #[command(subcommand)]
        action: HamlabAction,
    },
    /// Run the scenario named in the configuration.
    Run,
    /// Print the default configuration.
    Defaults,
}

#[derive(Debug, Subcommand)]
pub enum TriadsAction {
    Dump,
}

#[derive(Debug, Subcommand)]
pub enum CollisionAction {
    Scan,
}

#[derive(Debug, Subcommand)]
pub enum GmAction {
    Compare,
}

#[derive(Debug, Subcommand)]
pub enum HamlabAction {
    Run,
}

impl Command {
    fn scenario(&self) -> Option<Scenario> {
        Some(match self {
            Command::Dispersion => Scenario::Dispersion,
            Command::Triads { .. } => Scenario::TriadsDump,
            Command::Collision { .. } => Scenario::CollisionScan,
            Command::ExponentScan => Scenario::ExponentScan,
            Command::Locality => Scenario::Locality,
            Command::Evolve => Scenario::Evolve,
            Command::Gm { .. } => Scenario::GmCompare,
            Command::Hamlab { .. } => Scenario::HamlabRun,
            Command::Run | Command::Defaults => return None,
        })
    }
}

fn load(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            parse_config(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.output {
        cfg.output = out.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    cfg.deterministic |= cli.deterministic;
    if let Some(s) = cli.command.scenario() {
        cfg.scenario = s.name().to_string();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn thread_count(cli: &Cli, cfg: &RunConfig) -> Result<usize, CliError> {
    if cfg.deterministic {
        return Ok(1);
    }
    match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => Ok(n),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Runs one invocation. Failures after the output directory is known leave
/// an `error.txt` there.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    if let Command::Defaults = cli.command {
        print!("{}", RunConfig::default().to_toml());
        return Ok(());
    }
    let cfg = load(cli)?;
    let scenario = cfg.scenario().map_err(CliError::Usage)?;
    let result = run(&cfg, scenario, thread_count(cli, &cfg)?);
    if let Err(e) = &result {
        if let Err(io) = write_diagnostic(&cfg.output, e) {
            log::warn!("could not write diagnostic: {io}");
        }
    }
    result
}

/// Executes `scenario` on a dedicated pool and writes the manifest.
pub fn run(cfg: &RunConfig, scenario: Scenario, threads: usize) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Compute(format!("thread pool: {e}")))?;
    let mut out = OutputDir::create(&cfg.output)?;
    log::info!(
        "{scenario} on {threads} threads into {}",
        cfg.output.display()
    );
    let summary = pool.install(|| scenarios::run_scenario(scenario, cfg, &mut out))?;
    out.text("config.toml", &cfg.to_toml())?;
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        scenario: scenario.name().to_string(),
        threads,
        artifacts: out.artifacts().to_vec(),
        summary,
        config: cfg.clone(),
    };
    out.manifest(&manifest)
}
