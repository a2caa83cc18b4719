//! `lipz` command line: parse map files, run the analyzers, print reports.
//!
//! Exit codes: 0 success, 1 a verification found violations, 2 bad input.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use lipz_core::grid::grid_csv;
use lipz_core::rational::{parse_rational, Rational};
use lipz_core::rigidity::folner_csv;
use lipz_core::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(
    name = "lipz",
    version,
    about = "Exact analysis of bi-Lipschitz bijections of Z and Z^2"
)]
pub struct Cli {
    /// Worker threads for enumeration and grid scans (results do not depend on it).
    #[arg(long, global = true, value_parser = parse_threads)]
    threads: Option<usize>,
    /// Print run metadata (version, threads, elapsed time) to stderr.
    #[arg(long, global = true)]
    meta: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose a map as ±x + const + r(x) and check |r| <= C.
    Analyze {
        file: PathBuf,
        /// Analyze only the window A..B (inclusive) of the map.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<(i64, i64)>,
    },
    /// Profile the image of the ray (-inf, x].
    Ray {
        file: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        x: i64,
    },
    /// Enumerate bi-Lipschitz bijections of [0, n).
    Enumerate {
        #[command(flatten)]
        spec: SpecArgs,
        /// Print only the count.
        #[arg(long)]
        count_only: bool,
        /// Write every visited map as JSON lines.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Check the residual bound on every enumerated bijection.
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Følner ratios on [-n, n] as CSV.
    Folner {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_positive)]
        ns: Vec<u64>,
    },
    /// Maps of Z^2.
    Grid {
        action: GridAction,
        file: PathBuf,
        #[arg(long, value_parser = parse_positive)]
        n: Option<u64>,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: Option<(i64, i64)>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridAction {
    Apply,
    Lipschitz,
    Isogap,
    Folner,
}

#[derive(Debug, clap::Args)]
pub struct SpecArgs {
    #[arg(long)]
    n: usize,
    /// Forward cap, an integer or p/q.
    #[arg(long, value_parser = parse_cap)]
    k1: Rational,
    /// Backward cap, an integer or p/q.
    #[arg(long, value_parser = parse_cap)]
    k2: Rational,
}

impl SpecArgs {
    fn spec(&self) -> Result<EnumSpec, CliError> {
        EnumSpec::new(self.n, self.k1, self.k2).map_err(|e| CliError::Invalid(e.to_string()))
    }
}

fn parse_cap(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

fn parse_threads(text: &str) -> Result<usize, String> {
    match text.parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("expected a positive integer, got {text:?}")),
        Ok(n) => Ok(n),
    }
}

fn parse_positive(text: &str) -> Result<u64, String> {
    match text.trim().parse::<u64>() {
        Ok(0) | Err(_) => Err(format!("expected a positive integer, got {text:?}")),
        Ok(n) => Ok(n),
    }
}

fn parse_window(text: &str) -> Result<(i64, i64), String> {
    let bad = || format!("expected A..B with A < B, got {text:?}");
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a >= b {
        return Err(bad());
    }
    Ok((a, b))
}

fn parse_point(text: &str) -> Result<(i64, i64), String> {
    let bad = || format!("expected X,Y, got {text:?}");
    let (x, y) = text.split_once(',').ok_or_else(bad)?;
    Ok((
        x.trim().parse().map_err(|_| bad())?,
        y.trim().parse().map_err(|_| bad())?,
    ))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("--emit {path}: {source}")]
    Create {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: malformed JSON: {source}")]
    Malformed {
        path: String,
        source: serde_json::Error,
    },
    #[error("{path}: invalid {what}: {source}")]
    Schema {
        path: String,
        what: &'static str,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Invalid(String),
    #[error("output: {0}")]
    Write(#[from] std::io::Error),
}

fn load<T: DeserializeOwned>(path: &Path, what: &'static str) -> Result<T, CliError> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: display.clone(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| {
        if source.is_data() {
            CliError::Schema {
                path: display,
                what,
                source,
            }
        } else {
            CliError::Malformed {
                path: display,
                source,
            }
        }
    })
}

fn print_json(out: &mut dyn Write, value: &impl Serialize) -> Result<(), CliError> {
    serde_json::to_writer(&mut *out, value).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct EnumerationReport<'a> {
    spec: &'a EnumSpec,
    count: u64,
    stats: SearchStats,
}

/// Runs one command; returns the process exit code.
fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let threads = cli
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    match &cli.command {
        Command::Analyze { file, window } => {
            let f: EventuallyAffineMap = load(file, "map")?;
            let report = match window {
                None => decompose(&f),
                Some((a, b)) => decompose_window(&f.window(*a, *b))
                    .map_err(|e| CliError::Invalid(e.to_string()))?,
            };
            print_json(out, &report)?;
            Ok(if report.conforms { 0 } else { 1 })
        }
        Command::Ray { file, x } => {
            let f: EventuallyAffineMap = load(file, "map")?;
            print_json(out, &ray_profile(&f, *x))?;
            Ok(0)
        }
        Command::Enumerate {
            spec,
            count_only,
            emit,
        } => {
            let spec = spec.spec()?;
            let result = match emit {
                Some(path) => {
                    let file = File::create(path).map_err(|source| CliError::Create {
                        path: path.display().to_string(),
                        source,
                    })?;
                    let mut sink = BufWriter::new(file);
                    let mut failure = None;
                    let result = enumerate(&spec, |f| {
                        if failure.is_none() {
                            if let Err(e) = serde_json::to_writer(&mut sink, f)
                                .map_err(std::io::Error::from)
                                .and_then(|_| writeln!(sink))
                            {
                                failure = Some(e);
                            }
                        }
                    });
                    if let Some(e) = failure {
                        return Err(e.into());
                    }
                    sink.flush()?;
                    result
                }
                None => enumerate_parallel(&spec, threads, |_| {}),
            };
            if *count_only {
                writeln!(out, "{}", result.count)?;
            } else {
                print_json(
                    out,
                    &EnumerationReport {
                        spec: &spec,
                        count: result.count,
                        stats: result.stats,
                    },
                )?;
            }
            Ok(0)
        }
        Command::Verify { spec } => {
            let spec = spec.spec()?;
            let result = verify_theorem_parallel(&spec, threads);
            writeln!(
                out,
                "{} maps checked, {} violations",
                result.count,
                result.violations.len()
            )?;
            for f in &result.violations {
                print_json(out, f)?;
            }
            Ok(if result.violations.is_empty() { 0 } else { 1 })
        }
        Command::Folner { file, ns } => {
            let f: EventuallyAffineMap = load(file, "map")?;
            let curve = folner_curve(&f, ns);
            write!(
                out,
                "{}",
                folner_csv(curve.points.iter().map(|p| &p.report))
            )?;
            Ok(0)
        }
        Command::Grid {
            action,
            file,
            n,
            point,
        } => {
            let f: GridMap = load(file, "grid map")?;
            if *action == GridAction::Apply {
                let p = point
                    .ok_or_else(|| CliError::Invalid("--point: required for grid apply".into()))?;
                let (x, y) = f.apply(p);
                writeln!(out, "{x},{y}")?;
                return Ok(0);
            }
            let n =
                n.ok_or_else(|| CliError::Invalid("--n: required for this grid action".into()))?;
            let pool = rayon_pool(threads);
            let report = pool.install(|| match action {
                GridAction::Lipschitz => grid_lipschitz_window(&f, n).forward,
                GridAction::Isogap => isometry_gap(&f, n),
                GridAction::Folner => grid_folner_ratio(&f, n),
                GridAction::Apply => unreachable!(),
            });
            write!(out, "{}", grid_csv([&report]))?;
            Ok(0)
        }
    }
}

fn rayon_pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    let started = Instant::now();
    let code = match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    };
    if cli.meta {
        let threads = cli
            .threads
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        let _ = writeln!(
            err,
            "{}",
            serde_json::json!({
                "version": env!("CARGO_PKG_VERSION"),
                "threads": threads,
                "elapsed_ms": started.elapsed().as_millis() as u64,
                "exit": code,
            })
        );
    }
    code
}
