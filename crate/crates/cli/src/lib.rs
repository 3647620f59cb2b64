//! Command-line front end for `charfact`.
//!
//! Subcommands read instance files, run one theorem check each and emit a
//! certificate; `selftest` runs every suite on seeded instances. Exit codes:
//! 0 when every check passes, 1 on a mathematical failure, 2 on bad input.

pub mod certificate;
pub mod commands;
pub mod generate;
pub mod instance;
pub mod selftest;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use charfact::RankTolerance;
use clap::{Args, Parser, Subcommand, ValueEnum};

use certificate::{to_json_string, Certificate};
use commands::{PointSource, Settings};
use generate::ShapeLimits;
use instance::{parse_instance, InputError, Instance};

pub const RANK_TOL_ENV: &str = "CHARFACT_RANK_TOL";

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Input(String),
    Math(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Math(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Math(m) => write!(f, "{m}"),
        }
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        CliError::Input(e.0)
    }
}

impl From<charfact::Error> for CliError {
    fn from(e: charfact::Error) -> Self {
        use charfact::Error::*;
        match e {
            DimensionMismatch(_) | InvalidArgument(_) | WordTooLong { .. } => CliError::Input(e.to_string()),
            _ => CliError::Math(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "charfact",
    version,
    about = "Certified characteristic functions of row contractions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// What to print on stdout
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Also write the JSON certificate(s) to this file
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Truncation {
    /// Longest word kept in the truncated Fock space
    #[arg(long = "trunc", default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,
    /// Tolerance for the theorem's main residual
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Row-contraction, commutativity and defect report for an instance
    Check { instance: PathBuf },
    /// Characteristic function coefficients and lemma residuals
    Charfun {
        instance: PathBuf,
        #[command(flatten)]
        trunc: Truncation,
    },
    /// Factorization of the characteristic function of [[A, X], [0, B]]
    Factorize {
        instance: PathBuf,
        #[command(flatten)]
        trunc: Truncation,
    },
    /// Builds T from A, B and a unitary w and checks coincidence
    Converse {
        instance: PathBuf,
        #[command(flatten)]
        trunc: Truncation,
    },
    /// Commutative case: pointwise factorization on the ball, series and invariance
    Constrained {
        instance: PathBuf,
        #[command(flatten)]
        trunc: Truncation,
        /// JSON file with an array of points
        #[arg(long, conflicts_with = "grid")]
        points: Option<PathBuf>,
        /// Deterministic sample: COUNT[:RADIUS]
        #[arg(long, value_parser = parse_grid)]
        grid: Option<(usize, f64)>,
    },
    /// Every suite on seeded random instances
    Selftest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: u64,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=9))]
        max_n: u64,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        max_dim: u64,
        /// File of seeds to replay instead of SEED..SEED+COUNT
        #[arg(long)]
        seeds: Option<PathBuf>,
        #[command(flatten)]
        trunc: Truncation,
    },
    /// Prints the seeded instance used by selftest
    Generate {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=9))]
        max_n: u64,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        max_dim: u64,
        #[arg(long, value_enum, default_value_t = Kind::Pair)]
        kind: Kind,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// A, B and L
    Pair,
    /// A, B and w
    Converse,
    /// Commuting A, B and L
    Commuting,
}

fn parse_grid(s: &str) -> Result<(usize, f64), String> {
    let (count, radius) = match s.split_once(':') {
        Some((c, r)) => (c, r.parse::<f64>().map_err(|_| format!("bad radius {r:?}"))?),
        None => (s, selftest::SAMPLE_RADIUS),
    };
    let count = count
        .parse::<usize>()
        .map_err(|_| format!("bad point count {count:?}"))?;
    if !(0.0..1.0).contains(&radius) {
        return Err(format!("radius must lie in [0, 1), got {radius}"));
    }
    Ok((count, radius))
}

/// Rank cutoff from the environment, or the library default.
pub fn rank_tolerance() -> Result<RankTolerance, CliError> {
    match std::env::var(RANK_TOL_ENV) {
        Err(_) => Ok(RankTolerance::default()),
        Ok(v) => {
            let x: f64 = v
                .trim()
                .parse()
                .map_err(|_| CliError::Input(format!("{RANK_TOL_ENV} must be a number, got {v:?}")))?;
            Ok(RankTolerance::new(x)?)
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Instance, CliError> {
    Ok(parse_instance(&read(path)?)?)
}

fn check_tol(tol: f64) -> Result<f64, CliError> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(tol)
    } else {
        Err(CliError::Input(format!(
            "tolerance must be a nonnegative number, got {tol}"
        )))
    }
}

/// What a subcommand hands back for printing.
struct Report {
    json: serde_json::Value,
    text: String,
    pass: bool,
}

impl Report {
    fn single((cert, text): (Certificate, String)) -> Self {
        let pass = cert.pass();
        let mut text = text;
        text.push_str(&verdict(&cert));
        Self {
            json: cert.to_value(),
            text,
            pass,
        }
    }
}

fn verdict(cert: &Certificate) -> String {
    if cert.pass() {
        format!("theorem {}: PASS\n", cert.theorem)
    } else {
        format!("theorem {}: FAIL ({})\n", cert.theorem, cert.failures().join(", "))
    }
}

fn execute(cli: &Cli, stderr: &mut dyn Write) -> Result<Report, CliError> {
    let rank_tol = rank_tolerance()?;
    let settings = |trunc: &Truncation| -> Result<Settings, CliError> {
        Ok(Settings {
            k: trunc.k as usize,
            tol: check_tol(trunc.tol)?,
            rank_tol,
            seed: None,
        })
    };
    match &cli.command {
        Command::Check { instance } => {
            let s = Settings {
                k: 1,
                tol: 0.0,
                rank_tol,
                seed: None,
            };
            commands::check(&load(instance)?, &s).map(Report::single)
        }
        Command::Charfun { instance, trunc } => {
            commands::charfun(&load(instance)?, &settings(trunc)?).map(Report::single)
        }
        Command::Factorize { instance, trunc } => {
            commands::factorize(&load(instance)?, &settings(trunc)?).map(Report::single)
        }
        Command::Converse { instance, trunc } => {
            commands::converse(&load(instance)?, &settings(trunc)?).map(Report::single)
        }
        Command::Constrained {
            instance,
            trunc,
            points,
            grid,
        } => {
            let source = match (points, grid) {
                (Some(p), _) => PointSource::Given(selftest::parse_points(&read(p)?).map_err(CliError::Input)?),
                (None, Some((count, radius))) => PointSource::Grid {
                    count: *count,
                    radius: *radius,
                },
                (None, None) => PointSource::Grid {
                    count: selftest::SAMPLE_POINTS,
                    radius: selftest::SAMPLE_RADIUS,
                },
            };
            commands::constrained(&load(instance)?, &source, &settings(trunc)?).map(Report::single)
        }
        Command::Selftest {
            seed,
            count,
            max_n,
            max_dim,
            seeds,
            trunc,
        } => {
            let s = settings(trunc)?;
            let limits = ShapeLimits {
                max_n: *max_n as usize,
                max_dim: *max_dim as usize,
            };
            let mut list: Vec<u64> = match seeds {
                Some(path) => selftest::parse_seed_list(&read(path)?).map_err(CliError::Input)?,
                None => (0..*count).map(|i| seed.wrapping_add(i)).collect(),
            };
            list.sort_unstable();
            list.dedup();
            if list.is_empty() {
                writeln!(stderr, "warning: nothing run (no seeds)").ok();
            }
            let start = Instant::now();
            let certs: Vec<Certificate> = list
                .iter()
                .flat_map(|&sd| selftest::run_seed(sd, limits, s.k, s.tol, s.rank_tol))
                .collect();
            writeln!(stderr, "selftest: {} seeds in {:.2?}", list.len(), start.elapsed()).ok();
            let mut text = selftest::summarize(&certs);
            let failing: Vec<&Certificate> = certs.iter().filter(|c| !c.pass()).collect();
            for c in &failing {
                let seed = c.seed.map_or("-".to_owned(), |s| s.to_string());
                text.push_str(&format!(
                    "FAIL seed {seed} theorem {}: {}{}\n",
                    c.theorem,
                    c.failures().join(", "),
                    c.notes.first().map_or(String::new(), |n| format!(" ({n})"))
                ));
            }
            text.push_str(if failing.is_empty() {
                "selftest: PASS\n"
            } else {
                "selftest: FAIL\n"
            });
            Ok(Report {
                json: serde_json::Value::Array(certs.iter().map(Certificate::to_value).collect()),
                text,
                pass: failing.is_empty(),
            })
        }
        Command::Generate {
            seed,
            max_n,
            max_dim,
            kind,
        } => {
            let limits = ShapeLimits {
                max_n: *max_n as usize,
                max_dim: *max_dim as usize,
            };
            let inst = match kind {
                Kind::Pair => Instance::from_pair(&generate::pair_for(*seed, limits, rank_tol)?),
                Kind::Converse => generate::converse_for(*seed, limits, rank_tol)?,
                Kind::Commuting => Instance::from_pair(&generate::commuting_for(*seed, limits, rank_tol)?),
            };
            let mut json = inst.to_value();
            json["meta"] = serde_json::json!({ "seed": seed, "kind": format!("{kind:?}").to_lowercase() });
            let text = to_json_string(&json);
            Ok(Report { json, text, pass: true })
        }
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                write!(stderr, "{rendered}").ok();
            } else {
                write!(stdout, "{rendered}").ok();
            }
            return code;
        }
    };
    let report = match execute(&cli, stderr) {
        Ok(r) => r,
        Err(e) => {
            writeln!(stderr, "error: {e}").ok();
            return e.exit_code();
        }
    };
    let json = to_json_string(&report.json);
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &json) {
            writeln!(stderr, "error: cannot write {}: {e}", path.display()).ok();
            return 2;
        }
    }
    match cli.format {
        Format::Json => write!(stdout, "{json}").ok(),
        Format::Text => write!(stdout, "{}", report.text).ok(),
    };
    if report.pass {
        0
    } else {
        1
    }
}
