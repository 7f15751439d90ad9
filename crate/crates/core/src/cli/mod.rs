//! The `walklab` command line.

mod commands;
pub mod output;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path as FsPath, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::WalkError;
use crate::laws::DEFAULT_PRECISION;
use crate::montecarlo::DEFAULT_SEED;
pub use output::Format;

pub const DEFAULT_TRIALS: u64 = 100_000;

/// Exact random-walk laws, paper tables and Monte Carlo checks.
#[derive(Debug, Parser)]
#[command(name = "walklab", version)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Decimal places for rendered values.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..=60))]
    pub precision: Option<u32>,
    /// Write output to PATH instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// key=value defaults for precision, seed and trials.
    #[arg(long, global = true, env = "WALKLAB_CONFIG", value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recompute one of the numbered tables (1-4).
    Table {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        id: u8,
    },
    /// Evaluate a single law.
    Law(LawArgs),
    /// Emit the data series behind a figure (3, 4, 5, 7, 8 or 9).
    Figure(FigureArgs),
    /// Monte Carlo estimate next to the exact value.
    Simulate(SimulateArgs),
    /// Return series and transient/persistent classification.
    Recurrence(RecurrenceArgs),
    /// Run the oracle and identity battery.
    Verify {
        /// Run one group only: ballot, laws, ruin or recurrence.
        #[arg(long)]
        only: Option<String>,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LawName {
    U2n,
    FirstReturn,
    NoReturn,
    Nonnegative,
    FirstPassage,
    LeadTime,
    LeadCdf,
    Arcsine,
    LeadQuantile,
    ReturnCount,
    Ruin,
    RuinUnbiased,
    RuinBiased,
    RuinSymmetric,
    DurationRho,
    RuinApprox,
    Escape,
    HitZero,
    SeriesSum,
    ReturnProb,
    U2d,
    U3d,
    U3dBound,
    PathCount,
    Ballot,
    Loops,
}

#[derive(Debug, Args)]
pub struct LawArgs {
    #[arg(value_enum)]
    pub name: LawName,
    /// Half-length: the law is evaluated at time 2n.
    #[arg(long)]
    pub n: Option<u64>,
    /// Step-up probability as an exact fraction, e.g. 45/100.
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long)]
    pub b: Option<u64>,
    /// Starting height for ruin laws (fair walk only).
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<i64>,
    #[arg(long)]
    pub r: Option<u64>,
    #[arg(long)]
    pub alpha: Option<i64>,
    /// Odds ratio q/p as an exact fraction.
    #[arg(long)]
    pub rho: Option<String>,
    /// Fraction of the game for the arcsine law.
    #[arg(long)]
    pub frac: Option<f64>,
    /// Probability level for the lead quantile.
    #[arg(long)]
    pub level: Option<f64>,
    /// Horizon: days for lead-quantile, N or "inf" for escape.
    #[arg(long)]
    pub horizon: Option<String>,
    #[arg(long)]
    pub x: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<i64>,
    /// Loop counting mode: nonnegative or positive.
    #[arg(long, default_value = "nonnegative")]
    pub mode: String,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(long)]
    pub id: u8,
    /// Half-length for figures 3-5 (default 10).
    #[arg(long)]
    pub n: Option<u64>,
    /// Barrier(s) A for figures 7 and 9; comma separated.
    #[arg(long, value_delimiter = ',')]
    pub a: Vec<u64>,
    /// Largest A for figure 8 (default 20).
    #[arg(long)]
    pub a_max: Option<u64>,
    /// Largest rho on the grid for figures 7 and 9 (default 5).
    #[arg(long)]
    pub rho_max: Option<u64>,
    /// Grid points per unit of rho (default 10).
    #[arg(long)]
    pub rho_steps: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SimTarget {
    Ruin,
    Lead,
    Returns,
    FirstReturn,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(value_enum)]
    pub target: SimTarget,
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long)]
    pub b: Option<u64>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<i64>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub r: Option<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, env = "WALKLAB_SEED")]
    pub seed: Option<u64>,
    /// Parallel trial blocks; results do not depend on it.
    #[arg(long)]
    pub streams: Option<u32>,
    #[arg(long, hide = true)]
    pub step_cap: Option<u64>,
}

#[derive(Debug, Args)]
pub struct RecurrenceArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3))]
    pub dim: u32,
    /// Step-up probability, one dimension only.
    #[arg(long)]
    pub p: Option<String>,
    /// Series terms for dimensions 2 and 3 (default 1000).
    #[arg(long)]
    pub terms: Option<u64>,
}

/// Defaults read from the config file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfigFile {
    pub precision: Option<u32>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = ConfigFile::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = || CliError::Usage(format!("config line {}: '{line}'", lineno + 1));
            let (key, value) = line.split_once('=').ok_or_else(bad)?;
            let value = value.trim();
            match key.trim() {
                "precision" => cfg.precision = Some(value.parse().map_err(|_| bad())?),
                "seed" => cfg.seed = Some(value.parse().map_err(|_| bad())?),
                "trials" => cfg.trials = Some(value.parse().map_err(|_| bad())?),
                _ => return Err(bad()),
            }
        }
        if cfg.precision == Some(0) {
            return Err(CliError::Usage("config precision must be at least 1".into()));
        }
        Ok(cfg)
    }

    pub fn load(path: &FsPath) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// Settings after merging flags, environment and config file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Settings {
    pub format: Format,
    pub precision: usize,
    pub seed: u64,
    pub trials: u64,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or parameters: exit 2.
    Usage(String),
    /// A law applied outside its domain, e.g. a fair-only law with p != 1/2: exit 3.
    Domain(String),
    /// Verification failures: exit 1.
    Verify(Vec<String>),
    /// Too many capped Monte Carlo trials: exit 4.
    Quality(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Quality(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Domain(m) | CliError::Quality(m) => f.write_str(m),
            CliError::Verify(names) => write!(f, "failed checks: {}", names.join(", ")),
        }
    }
}

impl From<WalkError> for CliError {
    fn from(e: WalkError) -> Self {
        match e {
            WalkError::BiasedUnsupported { .. }
            | WalkError::NotUnbiased(_)
            | WalkError::NotBiased
            | WalkError::RhoOne => CliError::Domain(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

/// Output of a command: the rendered text plus a possible failure that is
/// reported after the text is written.
pub struct Outcome {
    pub text: String,
    pub failure: Option<CliError>,
}

fn settings(cli: &Cli) -> Result<Settings, CliError> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let seed = match &cli.command {
        Command::Simulate(s) => s.seed,
        _ => None,
    };
    let trials = match &cli.command {
        Command::Simulate(s) => s.trials,
        _ => None,
    };
    Ok(Settings {
        format: cli.format.unwrap_or(Format::Csv),
        precision: cli.precision.or(file.precision).map_or(DEFAULT_PRECISION, |p| p as usize),
        seed: seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        trials: trials.or(file.trials).unwrap_or(DEFAULT_TRIALS),
    })
}

/// Runs a parsed command line and returns the text to emit.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let s = settings(cli)?;
    match &cli.command {
        Command::Table { id } => commands::table(*id, &s),
        Command::Law(args) => commands::law(args, &s),
        Command::Figure(args) => commands::figure(args, &s),
        Command::Simulate(args) => commands::simulate(args, &s),
        Command::Recurrence(args) => commands::recurrence(args, &s),
        Command::Verify { only, inject_fault } => commands::verify(only.as_deref(), inject_fault.clone(), &s),
    }
}

/// Full entry point: parses `args`, writes output, returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return e.exit_code();
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "walklab: {e}");
            return e.exit_code();
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &outcome.text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(outcome.text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        let _ = writeln!(stderr, "walklab: {msg}");
        return 2;
    }
    match outcome.failure {
        Some(e) => {
            let _ = writeln!(stderr, "walklab: {e}");
            e.exit_code()
        }
        None => 0,
    }
}
