//! The `kms` command line.
//!
//! Every subcommand renders its result into a byte buffer first, so the
//! same arguments always give the same bytes whether they go to stdout or to
//! `--out`. Exit codes: 0 on success, 1 on a numerical failure (or a failed
//! verification check), 2 on a usage error.

use std::ffi::OsString;
use std::fmt;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use kms_core::borderline::trace_with_base;
use kms_core::classification::{scan_path, Classifier};
use kms_core::complex::{parse_complex, ComplexPoint};
use kms_core::matrix::{Dimension, EigType};
use kms_core::oracle::{full_spectrum, spectrum_split};
use kms_core::relations::default_borderline_tol;
use kms_core::singularities::find_cusps;
use kms_core::verify::{run_suite, CheckResult, Suite, SuiteReport, DEFAULT_SEED};

pub mod checks;
pub mod output;
pub mod svg;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "kms", version, about = "Spectra of complex-parameter KMS matrices: borderline curves, cusps and counts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Trace a borderline curve and write it as CSV.
    Trace(TraceArgs),
    /// Locate the cusps of a borderline curve (JSON).
    Cusps(CuspsArgs),
    /// Count the extraordinary eigenvalues of each type at one rho (JSON).
    Classify(ClassifyArgs),
    /// Typed eigenvalues of K_n(rho) (JSON).
    Spectrum(SpectrumArgs),
    /// Follow the two eigenvalues nearest the threshold along a line (CSV).
    Scan(ScanArgs),
    /// Label the regions cut out by both curves (JSON).
    Regions(RegionsArgs),
    /// Run the randomised invariant suites.
    Verify(VerifyArgs),
    /// Render a figure as standalone SVG.
    Figure(FigureArgs),
}

#[derive(Debug, Clone, Args)]
pub struct TraceArgs {
    #[arg(long, value_parser = parse_dimension)]
    pub n: Dimension,
    #[arg(long = "type", value_parser = parse_type)]
    pub eig_type: EigType,
    /// Uniform grid size before adaptive refinement.
    #[arg(long, default_value_t = 2048, value_parser = clap::value_parser!(u32).range(16..=1_000_000))]
    pub samples: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CuspsArgs {
    #[arg(long, value_parser = parse_dimension)]
    pub n: Dimension,
    #[arg(long = "type", value_parser = parse_type)]
    pub eig_type: EigType,
    /// Output is always JSON; the flag is accepted for explicitness.
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ClassifyArgs {
    #[arg(long, value_parser = parse_dimension)]
    pub n: Dimension,
    #[arg(long, value_parser = parse_rho, allow_hyphen_values = true)]
    pub rho: Complex64,
    /// Distance below which a point counts as lying on a curve.
    #[arg(long, default_value_t = kms_core::classification::ON_CURVE_TOL, value_parser = parse_positive)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[arg(long, value_parser = parse_dimension)]
    pub n: Dimension,
    #[arg(long, value_parser = parse_rho, allow_hyphen_values = true)]
    pub rho: Complex64,
    /// Unclustered eigenvalues of the two symmetry blocks.
    #[arg(long)]
    pub raw_roots: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[arg(long, value_parser = parse_dimension)]
    pub n: Dimension,
    #[arg(long = "type", value_parser = parse_type)]
    pub eig_type: EigType,
    #[arg(long, value_parser = parse_rho, allow_hyphen_values = true)]
    pub start: Complex64,
    /// Direction of travel; normalised to unit length.
    #[arg(long, value_parser = parse_direction, allow_hyphen_values = true)]
    pub dir: Complex64,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    pub to: f64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..=1_000_000))]
    pub steps: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RegionsArgs {
    #[arg(long, value_parser = parse_dimension)]
    pub n: Dimension,
    /// Grid cells per side of the labelling raster.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(8..=4000))]
    pub resolution: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all", value_parser = parse_suite)]
    pub suite: Suite,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Print the reports as JSON instead of one line per check.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    /// Both borderline curves with region labels.
    Curves,
    /// Principal phase of the borderline eigenvalue along the curve.
    Phase,
    /// The curve near its near real-axis crossing with the parabola model.
    Parabola,
    /// Moduli of the two eigenvalues nearest n through a cusp.
    Bifurcation,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    #[arg(long, value_enum)]
    pub id: FigureId,
    #[arg(long, value_parser = parse_dimension)]
    pub n: Dimension,
    #[arg(long = "type", value_parser = parse_type, default_value = "1")]
    pub eig_type: EigType,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Labelling raster for `curves`.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(8..=4000))]
    pub resolution: u32,
    /// `bifurcation`: the cusp nearest this point (default: smallest positive u0).
    #[arg(long, value_parser = parse_rho, allow_hyphen_values = true)]
    pub near: Option<Complex64>,
    /// `bifurcation`: direction of travel (default: the outward bisector).
    #[arg(long, value_parser = parse_direction, allow_hyphen_values = true)]
    pub dir: Option<Complex64>,
    /// `bifurcation`: half-width of the d range.
    #[arg(long, default_value_t = 0.02, value_parser = parse_positive)]
    pub width: f64,
    /// `bifurcation`: number of scan points.
    #[arg(long, default_value_t = 201, value_parser = clap::value_parser!(u32).range(2..=100_000))]
    pub steps: u32,
}

// ---------------------------------------------------------------- parsers

fn parse_dimension(s: &str) -> Result<Dimension, String> {
    let n: usize = s.trim().parse().map_err(|_| format!("expected an integer dimension, got {s:?}"))?;
    Dimension::new(n).map_err(|e| e.to_string())
}

fn parse_type(s: &str) -> Result<EigType, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "1" | "type1" | "type-1" => Ok(EigType::Type1),
        "2" | "type2" | "type-2" => Ok(EigType::Type2),
        _ => Err(format!("expected 1 or 2, got {s:?}")),
    }
}

fn parse_rho(s: &str) -> Result<Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

fn parse_direction(s: &str) -> Result<Complex64, String> {
    let z = parse_rho(s)?;
    if z.norm() == 0.0 {
        return Err("direction must be nonzero".into());
    }
    Ok(z)
}

fn parse_finite(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("expected a finite number, got {s:?}")),
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match parse_finite(s)? {
        x if x > 0.0 => Ok(x),
        x => Err(format!("expected a positive number, got {x}")),
    }
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: kms_core::error::Error| e.to_string())
}

// ---------------------------------------------------------------- errors

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(kms_core::error::Error),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numeric(_) | CliError::Io(_) => EXIT_FAILURE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numeric(e) => write!(f, "numerical failure: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<kms_core::error::Error> for CliError {
    fn from(e: kms_core::error::Error) -> Self {
        match e {
            // Argument checks the core performs itself are usage errors too.
            kms_core::error::Error::InvalidArgument(m) => CliError::Usage(m),
            e => CliError::Numeric(e),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

// ---------------------------------------------------------------- dispatch

/// Rendered result of one subcommand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rendered {
    pub bytes: Vec<u8>,
    /// `false` when a verification check failed.
    pub success: bool,
}

impl Rendered {
    fn ok(bytes: Vec<u8>) -> Self {
        Rendered { bytes, success: true }
    }
}

/// Parses `argv` (including the program name), runs the subcommand and
/// writes its output to `stdout` or the `--out` file. Returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = render(&cli.command).and_then(|r| {
        match out_path(&cli.command) {
            Some(path) => std::fs::write(path, &r.bytes)?,
            None => stdout.write_all(&r.bytes)?,
        }
        Ok(r.success)
    });
    match result {
        Ok(true) => EXIT_OK,
        // The reader went away (`kms trace ... | head`); nothing left to report.
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Ok(false) => EXIT_FAILURE,
        Err(e) => {
            let _ = writeln!(stderr, "kms: {e}");
            e.exit_code()
        }
    }
}

fn out_path(cmd: &Command) -> Option<&PathBuf> {
    match cmd {
        Command::Trace(a) => a.out.as_ref(),
        Command::Cusps(a) => a.out.as_ref(),
        Command::Classify(a) => a.out.as_ref(),
        Command::Spectrum(a) => a.out.as_ref(),
        Command::Scan(a) => a.out.as_ref(),
        Command::Regions(a) => a.out.as_ref(),
        Command::Figure(a) => a.out.as_ref(),
        Command::Verify(_) => None,
    }
}

/// Computes the output of `cmd` without writing it anywhere.
pub fn render(cmd: &Command) -> Result<Rendered, CliError> {
    let mut buf = Vec::new();
    match cmd {
        Command::Trace(a) => {
            let curve = trace_with_base(a.n, a.eig_type, a.samples as usize)?;
            output::write_curve_csv(&curve, &mut buf)?;
        }
        Command::Cusps(a) => write_json(&find_cusps(a.n, a.eig_type)?, &mut buf)?,
        Command::Classify(a) => {
            let q = Classifier::new(a.n)?.query_with_tol(a.rho, a.tol)?;
            let counts = Counts {
                j1: q.counts[0],
                j2: q.counts[1],
                conjecture_dependent: q.conjecture_dependent,
                oracle_fallback: q.oracle_fallback,
            };
            write_json(&counts, &mut buf)?;
        }
        Command::Spectrum(a) => {
            if a.raw_roots {
                let s = spectrum_split(a.n, a.rho)?;
                let raw = RawRoots {
                    n: a.n,
                    rho: ComplexPoint(a.rho),
                    type1: s.type1.iter().map(|&z| ComplexPoint(z)).collect(),
                    type2: s.type2.iter().map(|&z| ComplexPoint(z)).collect(),
                };
                write_json(&raw, &mut buf)?;
            } else {
                write_json(&full_spectrum(a.n, a.rho, default_borderline_tol(a.n))?, &mut buf)?;
            }
        }
        Command::Scan(a) => {
            let scan = scan_path(a.n, a.eig_type, a.start, a.dir, (a.from, a.to), a.steps as usize)?;
            output::write_scan_csv(&scan, &mut buf)?;
        }
        Command::Regions(a) => write_json(&Classifier::new(a.n)?.region_labels(a.resolution as usize)?, &mut buf)?,
        Command::Verify(a) => return Ok(render_verify(a)),
        Command::Figure(a) => svg::emit_figure(&svg::FigureRequest::from_args(a), &mut buf)?,
    }
    Ok(Rendered::ok(buf))
}

/// `classify` output.
#[derive(Debug, Serialize)]
struct Counts {
    j1: usize,
    j2: usize,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    conjecture_dependent: bool,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    oracle_fallback: bool,
}

/// `spectrum --raw-roots` output.
#[derive(Debug, Serialize)]
struct RawRoots {
    n: Dimension,
    rho: ComplexPoint,
    type1: Vec<ComplexPoint>,
    type2: Vec<ComplexPoint>,
}

fn write_json<T: Serialize + ?Sized>(value: &T, buf: &mut Vec<u8>) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *buf, value)?;
    buf.push(b'\n');
    Ok(())
}

/// One block of `verify` output: a core suite or the command-line checks.
#[derive(Debug, Serialize)]
pub struct Section {
    pub name: String,
    pub checks: Vec<CheckResult>,
    pub elapsed_secs: f64,
}

impl From<SuiteReport> for Section {
    fn from(r: SuiteReport) -> Self {
        Section { name: r.suite.to_string(), checks: r.checks, elapsed_secs: r.elapsed_secs }
    }
}

fn render_verify(a: &VerifyArgs) -> Rendered {
    let mut sections: Vec<Section> = run_suite(a.suite, a.seed).into_iter().map(Section::from).collect();
    if a.suite == Suite::All {
        sections.push(checks::cli_section());
    }
    let success = sections.iter().all(|s| s.checks.iter().all(|c| c.passed));
    let mut buf = Vec::new();
    if a.json {
        serde_json::to_writer_pretty(&mut buf, &sections).expect("reports serialise");
        buf.push(b'\n');
    } else {
        let (mut total, mut failed) = (0, 0);
        for s in &sections {
            buf.extend(format!("== {} ({:.1} s)\n", s.name, s.elapsed_secs).bytes());
            for c in &s.checks {
                total += 1;
                failed += usize::from(!c.passed);
                let tag = if c.passed { "PASS" } else { "FAIL" };
                buf.extend(format!("{tag} {}: {}\n", c.name, c.detail).bytes());
            }
        }
        buf.extend(format!("{total} checks, {failed} failed\n").bytes());
    }
    Rendered { bytes: buf, success }
}
