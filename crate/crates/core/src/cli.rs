//! Command-line front end.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use crate::constants::{annihilating_split, prime_zeta, shape_constant};
use crate::error::{Error, Result};
use crate::exact::{count_shape, required_prime_bound};
use crate::primes::{iroot, PrimeTable, MAX_SIEVE_LIMIT};
use crate::report::{compare_rows, write_csv, write_json};
use crate::shapes::{Mode, Shape};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

/// Environment variable holding a fixed default sieve limit.
pub const LIMIT_ENV: &str = "SHAPECOUNT_LIMIT";

// tables are never built smaller than this
const MIN_LIMIT: u64 = 1 << 10;
// lpf data is not needed by any subcommand
const CLI_FACTOR_LIMIT: u64 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "shapecount",
    version,
    about = "Count integers with a prescribed prime factorization shape"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact number of shape members up to x.
    Count(CountArgs),
    /// Constant factor of the asymptotic, or the uniqueness check for a beta.
    Constant(ConstantArgs),
    /// Exact vs asymptotic report over a grid of x values.
    Compare(CompareArgs),
    /// The prime zeta function P(s).
    PrimeZeta(PrimeZetaArgs),
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long)]
    pub shape: Shape,
    #[arg(long, value_parser = parse_x)]
    pub x: u64,
    #[arg(long)]
    pub mode: Mode,
    /// Sieve limit; derived from the inputs when omitted.
    #[arg(long)]
    pub limit: Option<u64>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("target").required(true).args(["shape", "beta"])))]
pub struct ConstantArgs {
    #[arg(long, requires = "mode")]
    pub shape: Option<Shape>,
    #[arg(long)]
    pub mode: Option<Mode>,
    /// Exponent list to test for the uniqueness condition.
    #[arg(long, requires = "check_unique")]
    pub beta: Option<Shape>,
    #[arg(long, requires = "beta")]
    pub check_unique: bool,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub limit: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub shape: Shape,
    #[arg(long)]
    pub mode: Mode,
    /// Comma-separated x values, e.g. "1e4,1e6,1e8".
    #[arg(long, value_parser = parse_grid)]
    pub x_grid: Grid,
    #[arg(long, value_enum)]
    pub format: Format,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub limit: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PrimeZetaArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub s: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long)]
    pub limit: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid(pub Vec<u64>);

/// Parses a nonnegative integer written plainly or as `<integer>e<digits>`.
pub fn parse_x(s: &str) -> std::result::Result<u64, String> {
    let s = s.trim();
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, Some(e)),
        None => (s, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !digits(mantissa) || exp.is_some_and(|e| !digits(e)) {
        return Err(format!(
            "{s:?} is not an integer (use digits or forms like 1e8)"
        ));
    }
    let too_big = || format!("{s} exceeds 2^63 - 1");
    let mut value: u64 = mantissa.parse().map_err(|_| too_big())?;
    if let Some(e) = exp {
        let e: u32 = e.parse().map_err(|_| too_big())?;
        if value != 0 {
            value = 10u64
                .checked_pow(e)
                .and_then(|p| value.checked_mul(p))
                .ok_or_else(too_big)?;
        }
    }
    if value > i64::MAX as u64 {
        return Err(too_big());
    }
    Ok(value)
}

pub fn parse_grid(s: &str) -> std::result::Result<Grid, String> {
    s.split(',')
        .map(parse_x)
        .collect::<std::result::Result<_, _>>()
        .map(Grid)
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidShape(_)
        | Error::Domain(_)
        | Error::Precondition(_)
        | Error::InvalidTolerance(_) => EXIT_USAGE,
        Error::Capacity { .. }
        | Error::Budget { .. }
        | Error::OutOfRange { .. }
        | Error::Inconsistent(_) => EXIT_RESOURCE,
        Error::Divergent(_) | Error::Tolerance { .. } => EXIT_NUMERIC,
    }
}

/// Result of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

enum Failure {
    Lib(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::fail(EXIT_USAGE, text)
            } else {
                Outcome::ok(text)
            };
        }
    };
    match dispatch(cli.command) {
        Ok(out) => out,
        Err(Failure::Usage(msg)) => Outcome::fail(EXIT_USAGE, format!("error: {msg}\n")),
        Err(Failure::Io(msg)) => Outcome::fail(EXIT_RESOURCE, format!("error: {msg}\n")),
        Err(Failure::Lib(e)) => Outcome::fail(exit_code(&e), format!("error: {e}\n")),
    }
}

fn dispatch(command: Command) -> std::result::Result<Outcome, Failure> {
    match command {
        Command::Count(a) => run_count(a),
        Command::Constant(a) => run_constant(a),
        Command::Compare(a) => run_compare(a),
        Command::PrimeZeta(a) => run_prime_zeta(a),
    }
}

fn run_count(a: CountArgs) -> std::result::Result<Outcome, Failure> {
    let fixed = fixed_limit(a.limit)?;
    let start = required_prime_bound(u128::from(a.x), a.shape.exponents());
    let count = with_table(fixed, start, |t| count_shape(a.x, &a.shape, a.mode, t))?;
    Ok(Outcome::ok(format!("{}\n", count.count)))
}

fn run_constant(a: ConstantArgs) -> std::result::Result<Outcome, Failure> {
    if let Some(beta) = a.beta {
        let text = match annihilating_split(beta.exponents()) {
            None => "unique\n".to_string(),
            Some((l, r)) => format!("not unique: {} vs {}\n", braces(&l), braces(&r)),
        };
        return Ok(Outcome::ok(text));
    }
    let shape = a.shape.expect("clap enforces shape or beta");
    let mode = a.mode.expect("clap enforces mode with shape");
    let sig = shape.normalize();
    let fixed = fixed_limit(a.limit)?;
    let (c, method) = with_table(fixed, 1 << 16, |t| shape_constant(&sig, mode, a.tol, t))?;
    Ok(Outcome::ok(format!(
        "value {:?}\ntail_bound {:e}\nthreshold {}\nmethod {method}\n",
        c.value, c.tail_bound, c.truncation_threshold
    )))
}

fn braces(v: &[u32]) -> String {
    let parts: Vec<String> = v.iter().map(u32::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn run_compare(a: CompareArgs) -> std::result::Result<Outcome, Failure> {
    let fixed = fixed_limit(a.limit)?;
    let sig = a.shape.normalize();
    let start = a
        .x_grid
        .0
        .iter()
        .map(|&x| {
            let x = u128::from(x);
            let exact = required_prime_bound(x, a.shape.exponents());
            let root = iroot(x, sig.alpha) >> (sig.k - 1).min(127);
            exact.max(root.min(u128::from(u64::MAX)) as u64)
        })
        .max()
        .unwrap_or(MIN_LIMIT)
        .max(1 << 16);
    let rows = with_table(fixed, start, |t| {
        compare_rows(&a.shape, a.mode, &a.x_grid.0, a.tol, t)
    })?;
    let file = File::create(&a.out)
        .map_err(|e| Failure::Io(format!("cannot write {}: {e}", a.out.display())))?;
    let mut w = BufWriter::new(file);
    let written = match a.format {
        Format::Csv => write_csv(&rows, &mut w),
        Format::Json => write_json(&rows, &mut w),
    };
    written
        .and_then(|()| w.flush())
        .map_err(|e| Failure::Io(format!("cannot write {}: {e}", a.out.display())))?;
    Ok(Outcome {
        code: EXIT_OK,
        stdout: String::new(),
        stderr: format!("wrote {} rows to {}\n", rows.len(), a.out.display()),
    })
}

fn run_prime_zeta(a: PrimeZetaArgs) -> std::result::Result<Outcome, Failure> {
    let fixed = fixed_limit(a.limit)?;
    let c = with_table(fixed, MIN_LIMIT, |t| prime_zeta(a.s, a.tol, t))?;
    Ok(Outcome::ok(format!(
        "value {:?}\ntail_bound {:e}\nthreshold {}\n",
        c.value, c.tail_bound, c.truncation_threshold
    )))
}

/// `--limit`, else the environment override, else `None` (grow as needed).
fn fixed_limit(flag: Option<u64>) -> std::result::Result<Option<u64>, Failure> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(LIMIT_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("{LIMIT_ENV}={v:?} is not a decimal integer"))),
        Err(_) => Ok(None),
    }
}

/// Runs `f` on a table of the fixed limit, or on tables grown from `start`
/// until the computation stops asking for more primes.
fn with_table<T>(
    fixed: Option<u64>,
    start: u64,
    f: impl Fn(&PrimeTable) -> Result<T>,
) -> Result<T> {
    if let Some(limit) = fixed {
        return f(&PrimeTable::with_factor_limit(limit, CLI_FACTOR_LIMIT)?);
    }
    let mut limit = start.clamp(MIN_LIMIT, MAX_SIEVE_LIMIT);
    loop {
        let table = PrimeTable::with_factor_limit(limit, CLI_FACTOR_LIMIT)?;
        match f(&table) {
            Err(e) if limit < MAX_SIEVE_LIMIT => match e.needed_limit() {
                Some(needed) if needed > limit => {
                    limit = needed.max(limit.saturating_mul(2)).min(MAX_SIEVE_LIMIT);
                }
                _ => return Err(e),
            },
            other => return other,
        }
    }
}
