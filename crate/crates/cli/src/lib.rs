//! The `linnik` command line: argument parsing, worker setup, and dispatch
//! to the subcommands. [`run`] never panics on bad input; every failure is
//! mapped to an exit code.

// `!(x >= 0.0)` is how NaN gets rejected along with the negatives
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
pub mod dump;
pub mod error;
mod output;
pub mod svg;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use error::{CliError, CliResult};

/// Largest `n` any command will scan.
pub const MAX_SCAN_N: u64 = 50_000_000;
/// Largest `Δ` accepted for geodesic and cycle enumerations.
pub const MAX_GEODESIC_DELTA: u64 = 20_000_000;
/// Largest predicted output of `wset`.
pub const MAX_WSET_OUTPUT: f64 = 2e7;

#[derive(Debug, Parser)]
#[command(name = "linnik", version, about = "Aggregate-Linnik sets, CM points and RM curves on rational geodesics")]
pub struct Cli {
    /// Worker threads (the LINNIK_WORKERS environment variable takes precedence).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate {m/n in I : 0 < F(m,n) <= Δ} with an equidistribution report.
    Wset(WsetArgs),
    /// Enumerate CM points or RM curves attached to a geodesic or a point.
    Enum(GeoArgs),
    /// Compare counts against the main term along a ladder of Δ.
    Verify(VerifyArgs),
    /// Draw an enumeration (or a JSON dump of one) as SVG.
    Render(RenderArgs),
    /// CM averages along a closed geodesic against the cycle integral.
    Cycle(CycleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write here instead of standard output.
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WsetArgs {
    #[arg(short = 'A', allow_hyphen_values = true, value_parser = parse_real)]
    pub a: f64,
    #[arg(short = 'B', allow_hyphen_values = true, value_parser = parse_real)]
    pub b: f64,
    #[arg(short = 'C', allow_hyphen_values = true, value_parser = parse_real)]
    pub c: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_real)]
    pub delta: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_endpoint)]
    pub lo: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_endpoint)]
    pub hi: f64,
    /// Read lo > hi as the interval through ∞.
    #[arg(long)]
    pub wrap: bool,
    #[arg(long, default_value_t = 8)]
    pub buckets: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// CM points on the geodesic of (A,B,C).
    CmOn,
    /// RM curves perpendicular to the geodesic of (A,B,C).
    RmPerp,
    /// RM curves through the CM point of (A,B,C).
    RmThrough,
}

#[derive(Debug, Args)]
pub struct GeoArgs {
    #[arg(long, value_enum, default_value = "cm-on")]
    pub mode: ModeArg,
    #[arg(short = 'A', allow_hyphen_values = true, value_parser = parse_int)]
    pub a: i128,
    #[arg(short = 'B', allow_hyphen_values = true, value_parser = parse_int)]
    pub b: i128,
    #[arg(short = 'C', allow_hyphen_values = true, value_parser = parse_int)]
    pub c: i128,
    #[arg(long, value_parser = parse_count)]
    pub delta: u64,
    /// Arc start: θ on a semicircle, y on a half-line.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_endpoint, requires = "hi")]
    pub lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_endpoint, requires = "lo")]
    pub hi: Option<f64>,
    /// Outline the standard fundamental domain in SVG output.
    #[arg(long)]
    pub fundamental_domain: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// One of a0-bpos, a0-bneg, apos-dpos, apos-dneg, d0, aneg.
    #[arg(long)]
    pub case: String,
    #[arg(short = 'A', allow_hyphen_values = true, value_parser = parse_real, requires_all = ["b", "c"])]
    pub a: Option<f64>,
    #[arg(short = 'B', allow_hyphen_values = true, value_parser = parse_real, requires_all = ["a", "c"])]
    pub b: Option<f64>,
    #[arg(short = 'C', allow_hyphen_values = true, value_parser = parse_real, requires_all = ["a", "b"])]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_endpoint, requires = "hi")]
    pub lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_endpoint, requires = "lo")]
    pub hi: Option<f64>,
    #[arg(long)]
    pub wrap: bool,
    #[arg(long, default_value = "1e4,1e5,1e6")]
    pub delta_ladder: String,
    /// Bound on |empirical − predicted| / Δ^0.6.
    #[arg(long, default_value_t = 10.0, value_parser = parse_real)]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// A JSON dump written by `enum --format json`.
    #[arg(long, conflicts_with_all = ["a", "b", "c", "delta"])]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "cm-on")]
    pub mode: ModeArg,
    #[arg(short = 'A', allow_hyphen_values = true, value_parser = parse_int)]
    pub a: Option<i128>,
    #[arg(short = 'B', allow_hyphen_values = true, value_parser = parse_int)]
    pub b: Option<i128>,
    #[arg(short = 'C', allow_hyphen_values = true, value_parser = parse_int)]
    pub c: Option<i128>,
    #[arg(long, value_parser = parse_count)]
    pub delta: Option<u64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_endpoint, requires = "hi")]
    pub lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_endpoint, requires = "lo")]
    pub hi: Option<f64>,
    #[arg(long)]
    pub fundamental_domain: bool,
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionArg {
    One,
    J,
}

#[derive(Debug, Args)]
pub struct CycleArgs {
    #[arg(short = 'A', allow_hyphen_values = true, value_parser = parse_int)]
    pub a: i128,
    #[arg(short = 'B', allow_hyphen_values = true, value_parser = parse_int)]
    pub b: i128,
    #[arg(short = 'C', allow_hyphen_values = true, value_parser = parse_int)]
    pub c: i128,
    #[arg(long = "f", value_enum, default_value = "one")]
    pub function: FunctionArg,
    #[arg(long, default_value = "1e4,1e5,1e6")]
    pub delta_ladder: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn parse_real(s: &str) -> Result<f64, String> {
    match linnik::extf::parse(s) {
        Some(v) if v.is_finite() => Ok(v),
        _ => Err(format!("expected a finite number, got {s:?}")),
    }
}

fn parse_endpoint(s: &str) -> Result<f64, String> {
    match linnik::extf::parse(s) {
        Some(v) if !v.is_nan() => Ok(v),
        _ => Err(format!("expected a number, inf or -inf, got {s:?}")),
    }
}

fn parse_int(s: &str) -> Result<i128, String> {
    s.trim().parse().map_err(|_| format!("expected an integer, got {s:?}"))
}

/// A non-negative integer, also in float notation such as `1e6`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.trim().parse::<u64>() {
        return Ok(v);
    }
    match s.trim().parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < 9.007_199_254_740_992e15 => Ok(v as u64),
        _ => Err(format!("expected a non-negative integer, got {s:?}")),
    }
}

pub(crate) fn parse_ladder(s: &str) -> CliResult<Vec<u64>> {
    let v: Vec<u64> = s
        .split(',')
        .map(|p| parse_count(p).map_err(CliError::Input))
        .collect::<CliResult<_>>()?;
    if v.is_empty() {
        return Err(CliError::Input("empty Δ ladder".into()));
    }
    Ok(v)
}

fn worker_count(flag: Option<usize>) -> CliResult<Option<usize>> {
    let n = match std::env::var("LINNIK_WORKERS") {
        Ok(s) => Some(
            s.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Input(format!("LINNIK_WORKERS must be a positive integer, got {s:?}")))?,
        ),
        Err(_) => flag,
    };
    match n {
        Some(0) => Err(CliError::Input("worker count must be positive".into())),
        Some(k) if k > 1024 => Err(CliError::Input(format!("worker count {k} is too large"))),
        other => Ok(other),
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    let workers = worker_count(cli.workers)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = workers {
        builder = builder.num_threads(k);
    }
    let pool = builder.build().map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
    // output is assembled on this thread, after the parallel work
    let mut buf: Vec<u8> = Vec::new();
    let result = pool.install(|| match cli.command {
        Command::Wset(a) => commands::wset(&a, &mut buf),
        Command::Enum(a) => commands::enumerate(&a, &mut buf),
        Command::Verify(a) => commands::verify(&a, &mut buf),
        Command::Render(a) => commands::render(&a, &mut buf),
        Command::Cycle(a) => commands::cycle(&a, &mut buf),
    });
    out.write_all(&buf)?;
    result
}

/// Runs the command line `args` (including the program name) and returns
/// the exit code: 0 success, 1 internal, 2 bad input, 3 guard exceeded,
/// 4 tolerance failure.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "linnik: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_accept_float_notation() {
        assert_eq!(parse_count("1e6"), Ok(1_000_000));
        assert_eq!(parse_count(" 42 "), Ok(42));
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
        assert!(parse_count("nan").is_err());
        assert!(parse_count("1e40").is_err());
    }

    #[test]
    fn ladders() {
        assert_eq!(parse_ladder("1e4,1e5").unwrap(), vec![10_000, 100_000]);
        assert!(parse_ladder("").is_err());
        assert!(parse_ladder("10,,20").is_err());
    }

    #[test]
    fn endpoints_allow_infinity_but_reals_do_not() {
        assert_eq!(parse_endpoint("-inf"), Ok(f64::NEG_INFINITY));
        assert!(parse_real("inf").is_err());
        assert!(parse_endpoint("nan").is_err());
    }
}
