//! Command-line surface of the `janus` binary.
//!
//! Subcommands `epr`, `update`, `compare`, `jpd`, `sample` and `spectral`
//! print aligned human tables interleaved with `@kind key=value` records
//! (see [`record`]). Angles are given in degrees and sites are numbered from 1.
//!
//! Exit status: 0 success, 1 numeric or parse failure, 2 usage error,
//! 3 incompatible observables, 4 no joint distribution, 5 signaling behavior.
//!
//! Seeds come from `--seed`, then the scenario's `task` section, then the
//! `JANUS_SEED` environment variable, then [`DEFAULT_SEED`].

mod behavior;
mod commands;
pub mod record;
pub mod scenario;

use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::harness::SampleMode;
use crate::tolerance::Tolerances;

pub use behavior::{behavior_to_text, parse_behavior};
pub use record::{parse_record, parse_records, Record};
pub use scenario::{parse_seed, Scenario};

/// `0x4A4E5553`, the bytes of "JNUS".
pub const DEFAULT_SEED: u64 = 0x4A4E_5553;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCOMPATIBLE: i32 = 3;
pub const EXIT_NO_JPD: i32 = 4;
pub const EXIT_SIGNALING: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "janus",
    version,
    about = "Quantum and classical probability update side by side"
)]
struct Cli {
    /// Tolerance override, e.g. `--tol commute=1e-8` (repeatable)
    #[arg(long = "tol", value_name = "KEY=VALUE", global = true)]
    tol: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Polarizer pair on (|xx> + |yy>)/sqrt2
    Epr(EprArgs),
    /// Lüders update of a scenario state
    Update(UpdateArgs),
    /// Classical embedding against quantum values
    Compare(CompareArgs),
    /// CHSH values and joint-distribution existence
    Jpd(JpdArgs),
    /// Seeded outcome records
    Sample(SampleArgs),
    /// Spectral decomposition of an observable
    Spectral(SpectralArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Direct,
    TwoStep,
}

impl From<ModeArg> for SampleMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Direct => SampleMode::Direct,
            ModeArg::TwoStep => SampleMode::TwoStep,
        }
    }
}

fn seed_arg(s: &str) -> Result<u64, String> {
    parse_seed(s).ok_or_else(|| format!("`{s}` is not a 64-bit integer"))
}

#[derive(Debug, Args)]
struct EprArgs {
    /// Site-1 polarizer orientation, degrees
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    angle_a: f64,
    /// Site-2 polarizer orientation, degrees
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    angle_b: f64,
    /// Append sampled frequencies from this many trials
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    trials: Option<u64>,
    /// RNG seed, decimal or 0x-hex
    #[arg(long, value_parser = seed_arg)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "direct")]
    mode: ModeArg,
}

#[derive(Debug, Args)]
struct UpdateArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// Setting or observable name (default: task `observable`, then `first`)
    #[arg(long)]
    observable: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    outcome: Option<f64>,
    /// Site the observable acts on, from 1
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    site: Option<u64>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long)]
    scenario: PathBuf,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct JpdSource {
    /// Behavior file with four labelled tables
    #[arg(long)]
    behavior: Option<PathBuf>,
    /// Scenario whose task lists `settings = A1 A2 B1 B2`
    #[arg(long)]
    scenario: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct JpdArgs {
    #[command(flatten)]
    source: JpdSource,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    trials: Option<u64>,
    /// RNG seed, decimal or 0x-hex
    #[arg(long, value_parser = seed_arg)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Print only the summary block
    #[arg(long)]
    no_records: bool,
}

#[derive(Debug, Args)]
struct SpectralArgs {
    /// Scenario holding the observable
    #[arg(long, requires = "observable")]
    scenario: Option<PathBuf>,
    #[arg(long)]
    observable: Option<String>,
    /// Row-major entries `re,im …` of a square Hermitian matrix
    #[arg(long, conflicts_with = "scenario", allow_hyphen_values = true)]
    matrix: Option<String>,
}

/// Failure of a subcommand, mapped to an exit status by [`run`].
#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(io::Error),
    Usage(String),
    /// Input error reported with its file path.
    File(PathBuf, Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn error_status(e: &Error) -> i32 {
    match e {
        Error::NotCompatible { .. } => EXIT_INCOMPATIBLE,
        Error::SignalingBehavior { .. } => EXIT_SIGNALING,
        _ => EXIT_FAILURE,
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// status. Output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let env_seed = std::env::var("JANUS_SEED").ok();
    let result = tolerances(&cli.tol).and_then(|tol| {
        let env_seed = match env_seed.as_deref().map(|s| (s, parse_seed(s))) {
            Some((_, Some(seed))) => Some(seed),
            Some((raw, None)) => {
                return Err(Failure::Usage(format!(
                    "JANUS_SEED `{raw}` is not a 64-bit integer"
                )))
            }
            None => None,
        };
        let ctx = commands::Context { tol, env_seed };
        match cli.command {
            Command::Epr(a) => commands::epr(&ctx, a, out),
            Command::Update(a) => commands::update(&ctx, a, out),
            Command::Compare(a) => commands::compare(&ctx, a, out),
            Command::Jpd(a) => commands::jpd(&ctx, a, out),
            Command::Sample(a) => commands::sample(&ctx, a, out),
            Command::Spectral(a) => commands::spectral(&ctx, a, out),
        }
    });
    match result {
        Ok(code) => code,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Lib(e) => (error_status(&e), format!("error: {e}")),
                Failure::File(path, e) => {
                    (error_status(&e), format!("error: {}: {e}", path.display()))
                }
                Failure::Io(e) => (EXIT_FAILURE, format!("error: {e}")),
                Failure::Usage(m) => (EXIT_USAGE, format!("error: {m}")),
            };
            let _ = writeln!(err, "{msg}");
            code
        }
    }
}

fn tolerances(overrides: &[String]) -> Result<Tolerances, Failure> {
    let mut tol = Tolerances::default();
    for o in overrides {
        let (k, v) = o
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--tol expects KEY=VALUE, got `{o}`")))?;
        let value: f64 = v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("--tol {k}: `{v}` is not a number")))?;
        tol.set(k.trim(), value).map_err(Failure::Usage)?;
    }
    Ok(tol)
}
