//! Command-line front end: `eval`, `table`, `constants` and `verify`.
//!
//! Exit codes: 0 success, 1 identity failure or numerical failure,
//! 2 usage error, 3 argument at or near a pole.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::Error;
use crate::functions::{self, FUNCTIONS};
use crate::lattice::{ConstantsReport, HalfPeriod, Lattice};
use crate::theta::SeriesConfig;
use crate::verify;
use crate::weierstrass::{EvalResult, Weierstrass};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_POLE: i32 = 3;

const DEFAULT_TAU: &str = "0.3,1.1";

#[derive(Debug, Parser)]
#[command(
    name = "ellipzeta",
    version,
    about = "Weierstrass elliptic functions, auxiliary zetas and zeta differences"
)]
pub struct Cli {
    #[command(flatten)]
    pub lattice: LatticeArgs,

    #[command(flatten)]
    pub precision: PrecisionArgs,

    /// Print the evaluable functions and exit
    #[arg(long, global = true)]
    pub list_fns: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    /// Half-period ω1 as "re,im"
    #[arg(long, global = true, default_value = "0.5,0", allow_hyphen_values = true)]
    pub omega1: String,

    /// Half-period ω3 as "re,im"
    #[arg(long, global = true, conflicts_with = "tau", allow_hyphen_values = true)]
    pub omega3: Option<String>,

    /// Period ratio τ = ω3/ω1 as "re,im" (default 0.3,1.1)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tau: Option<String>,
}

#[derive(Debug, Args)]
pub struct PrecisionArgs {
    /// Absolute truncation tolerance of the theta series
    #[arg(long, global = true, env = "ELLIPZETA_ABS_TOL")]
    pub abs_tol: Option<f64>,

    /// Relative truncation tolerance of the theta series
    #[arg(long, global = true, env = "ELLIPZETA_REL_TOL")]
    pub rel_tol: Option<f64>,

    /// Term cap of every series
    #[arg(long, global = true, env = "ELLIPZETA_MAX_TERMS")]
    pub max_terms: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one function at one point
    Eval {
        /// Function name, see --list-fns
        #[arg(long = "fn")]
        func: String,
        /// Argument as "re,im" or a half-period keyword ω1|ω2|ω3 (also w1..w3)
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        /// Second argument, for Pi
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        /// Evaluation route of zeta1..3 or the deltas
        #[arg(long)]
        route: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Tabulate a function on a rectangular grid, row-major
    Table {
        /// Function name, see --list-fns
        #[arg(long = "fn")]
        func: String,
        /// Lower-left corner "re,im"
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        /// Upper-right corner "re,im"
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Grid points along the imaginary axis
        #[arg(long, default_value_t = 1)]
        rows: usize,
        /// Grid points along the real axis
        #[arg(long, default_value_t = 1)]
        cols: usize,
        /// Second argument, for Pi
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        /// Evaluation route of zeta1..3 or the deltas
        #[arg(long)]
        route: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Print the lattice constants as JSON
    Constants,
    /// Run the identity suite and print the JSON report
    Verify {
        /// Samples per identity
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Seed of the sample generator
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Glob over identity names, e.g. "eq14_*"
        #[arg(long)]
        only: Option<String>,
    },
}

/// A failure with its exit code; the message goes to the error stream.
struct Exit(i32, String);

impl Exit {
    fn usage(msg: impl Into<String>) -> Self {
        Exit(EXIT_USAGE, msg.into())
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::PoleProximity { .. } => EXIT_POLE,
            Error::ZeroPeriod
            | Error::InvalidPeriodRatio { .. }
            | Error::ConvergencePolicy { .. }
            | Error::DegenerateLattice
            | Error::InvalidConfig(_)
            | Error::UnknownFunction(_)
            | Error::InvalidArgument(_)
            | Error::IdenticalIndices(_)
            | Error::SuiteConfig(_) => EXIT_USAGE,
            _ => EXIT_FAIL,
        };
        Exit(code, e.to_string())
    }
}

type Outcome = std::result::Result<i32, Exit>;

/// Parses a complex literal "re,im" (or a bare real).
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let mut parts = s.split(',').map(|p| p.trim().parse::<f64>());
    let re = parts.next()?.ok()?;
    let im = match parts.next() {
        Some(p) => p.ok()?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return None;
    }
    Some(Complex64::new(re, im))
}

fn half_period_keyword(s: &str) -> Option<HalfPeriod> {
    let digit = s
        .strip_prefix("ω")
        .or_else(|| s.strip_prefix("omega"))
        .or_else(|| s.strip_prefix('w'))?;
    HalfPeriod::from_number(digit.parse().ok()?)
}

fn point(w: &Weierstrass, s: &str, what: &str) -> std::result::Result<Complex64, Exit> {
    let s = s.trim();
    if let Some(h) = half_period_keyword(s) {
        return Ok(w.omega(h));
    }
    parse_complex(s).ok_or_else(|| Exit::usage(format!("{what}: expected \"re,im\" or ω1|ω2|ω3, got '{s}'")))
}

fn complex_arg(s: &str, what: &str) -> std::result::Result<Complex64, Exit> {
    parse_complex(s).ok_or_else(|| Exit::usage(format!("{what}: expected \"re,im\", got '{s}'")))
}

fn series_config(p: &PrecisionArgs) -> std::result::Result<SeriesConfig, Exit> {
    let mut cfg = SeriesConfig::default();
    if let Some(t) = p.abs_tol {
        cfg.abs_tol = t;
    }
    if let Some(t) = p.rel_tol {
        cfg.rel_tol = t;
    }
    if let Some(m) = p.max_terms {
        cfg.max_terms = m;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn lattice(l: &LatticeArgs) -> std::result::Result<Lattice, Exit> {
    let omega1 = complex_arg(&l.omega1, "--omega1")?;
    let lat = match (&l.omega3, &l.tau) {
        (Some(w3), _) => Lattice::new(omega1, complex_arg(w3, "--omega3")?)?,
        (None, t) => Lattice::from_tau(omega1, complex_arg(t.as_deref().unwrap_or(DEFAULT_TAU), "--tau")?)?,
    };
    Ok(lat)
}

#[derive(Serialize)]
struct EvalJson {
    value: Option<[f64; 2]>,
    status: &'static str,
}

impl From<&EvalResult> for EvalJson {
    fn from(r: &EvalResult) -> Self {
        EvalJson {
            value: r.is_finite().then_some([r.value.re, r.value.im]),
            status: r.status.name(),
        }
    }
}

#[derive(Serialize)]
struct TableJson {
    u: [f64; 2],
    #[serde(flatten)]
    result: EvalJson,
}

fn csv_row(u: Complex64, r: &EvalResult) -> [String; 5] {
    let (re, im) = if r.is_finite() {
        (r.value.re.to_string(), r.value.im.to_string())
    } else {
        (String::new(), String::new())
    };
    [u.re.to_string(), u.im.to_string(), re, im, r.status.name().to_string()]
}

const CSV_HEADER: [&str; 5] = ["re(u)", "im(u)", "re(f)", "im(f)", "status"];

fn write_csv(out: &mut dyn Write, rows: &[(Complex64, EvalResult)]) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for (u, r) in rows {
        w.write_record(csv_row(*u, r))?;
    }
    w.flush()
}

fn io(e: std::io::Error) -> Exit {
    Exit(EXIT_FAIL, format!("write failed: {e}"))
}

fn eval_at(
    w: &Weierstrass,
    func: &str,
    u: Complex64,
    a: Option<Complex64>,
    route: Option<&str>,
) -> std::result::Result<EvalResult, Exit> {
    match functions::evaluate(w, func, u, a, route) {
        Err(Error::PoleProximity { translate, .. }) => Ok(EvalResult::pole(crate::Status::NearPole { translate })),
        r => Ok(r?),
    }
}

fn cmd_eval(
    w: &Weierstrass,
    func: &str,
    u: &str,
    a: Option<&str>,
    route: Option<&str>,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let u = point(w, u, "--u")?;
    let a = a.map(|s| point(w, s, "--a")).transpose()?;
    let r = eval_at(w, func, u, a, route)?;
    match format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string(&EvalJson::from(&r)).expect("serializes")
        )
        .map_err(io)?,
        Format::Csv => write_csv(out, &[(u, r)]).map_err(io)?,
    }
    Ok(if r.is_finite() { EXIT_OK } else { EXIT_POLE })
}

fn grid_axis(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if n == 1 {
        lo
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_table(
    w: &Weierstrass,
    func: &str,
    from: &str,
    to: &str,
    rows: usize,
    cols: usize,
    a: Option<&str>,
    route: Option<&str>,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    if rows == 0 || cols == 0 {
        return Err(Exit::usage("grid needs rows ≥ 1 and cols ≥ 1"));
    }
    let from = complex_arg(from, "--from")?;
    let to = complex_arg(to, "--to")?;
    let a = a.map(|s| point(w, s, "--a")).transpose()?;
    let mut table = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let im = grid_axis(from.im, to.im, rows, i);
        for j in 0..cols {
            let u = Complex64::new(grid_axis(from.re, to.re, cols, j), im);
            table.push((u, eval_at(w, func, u, a, route)?));
        }
    }
    match format {
        Format::Csv => write_csv(out, &table).map_err(io)?,
        Format::Json => {
            let rows: Vec<_> = table
                .iter()
                .map(|(u, r)| TableJson {
                    u: [u.re, u.im],
                    result: r.into(),
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&rows).expect("serializes")).map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(w: &Weierstrass, n: usize, seed: u64, only: Option<&str>, out: &mut dyn Write) -> Outcome {
    let suite = verify::select(only)?;
    let reports = verify::run_suite_with(w, &verify::default_registry(), &suite, n, seed)?;
    writeln!(out, "{}", verify::report_json(&reports)).map_err(io)?;
    Ok(if reports.iter().all(|r| r.passed) {
        EXIT_OK
    } else {
        EXIT_FAIL
    })
}

fn list_fns(out: &mut dyn Write) -> Outcome {
    for f in FUNCTIONS {
        let extra = if f.needs_a { " (needs --a)" } else { "" };
        writeln!(out, "{:<14} {}{}", f.name, f.summary, extra).map_err(io)?;
    }
    Ok(EXIT_OK)
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Outcome {
    if cli.list_fns {
        return list_fns(out);
    }
    let Some(command) = cli.command else {
        return Err(Exit::usage(
            "a subcommand is required (eval, table, constants, verify); see --help",
        ));
    };
    let cfg = series_config(&cli.precision)?;
    let w = Weierstrass::new(lattice(&cli.lattice)?, cfg)?;
    match command {
        Command::Eval {
            func,
            u,
            a,
            route,
            format,
        } => cmd_eval(&w, &func, &u, a.as_deref(), route.as_deref(), format, out),
        Command::Table {
            func,
            from,
            to,
            rows,
            cols,
            a,
            route,
            format,
        } => cmd_table(
            &w,
            &func,
            &from,
            &to,
            rows,
            cols,
            a.as_deref(),
            route.as_deref(),
            format,
            out,
        ),
        Command::Constants => {
            let report = ConstantsReport::new(w.lattice(), w.constants());
            writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("serializes")).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Verify { n, seed, only } => cmd_verify(&w, n, seed, only.as_deref(), out),
    }
}

/// Runs the command line `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
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
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(Exit(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}
