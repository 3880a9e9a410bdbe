//! Command-line front end: curves and reports as CSV, optional SVG plots.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 numerical or I/O
//! failure.

mod output;
mod svg;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::classical::{self, ClassicalError, McConfig, McMode};
use crate::numerics::{self, DensityCurve, NumericsError, RadialGrid};
use crate::quantum::{self, Branch, QuantumError, RadialState, StateLabel, TotalDensity};
use crate::specfun::{self, SpecfunError};

pub use output::sig17;

/// Environment variable supplying the default worker count.
pub const THREADS_ENV: &str = "SPHWELL_THREADS";

/// Largest deviation from unit mass tolerated when emitting a total density.
const TOTAL_MASS_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) | CliError::Io { .. } => 2,
        }
    }
}

impl From<SpecfunError> for CliError {
    fn from(e: SpecfunError) -> Self {
        match e {
            SpecfunError::NoConvergence { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<NumericsError> for CliError {
    fn from(e: NumericsError) -> Self {
        match e {
            NumericsError::InvalidGrid(_) | NumericsError::InvalidEdges(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<ClassicalError> for CliError {
    fn from(e: ClassicalError) -> Self {
        match e {
            ClassicalError::Numerics(inner) => inner.into(),
            ClassicalError::Singular(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<QuantumError> for CliError {
    fn from(e: QuantumError) -> Self {
        match e {
            QuantumError::Specfun(inner) => inner.into(),
            QuantumError::Numerics(inner) => inner.into(),
            QuantumError::Classical(inner) => inner.into(),
            QuantumError::NormalizationMismatch { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "sphwell", version, about = "Radial probability densities in an infinite spherical well")]
pub struct Cli {
    /// Worker threads: a positive integer or `auto` [env: SPHWELL_THREADS]
    #[arg(long, global = true, value_parser = parse_threads)]
    threads: Option<Threads>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Threads {
    Auto,
    Count(usize),
}

fn parse_threads(s: &str) -> std::result::Result<Threads, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(Threads::Auto);
    }
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(Threads::Count(n)),
        _ => Err(format!("expected a positive integer or `auto`, got `{s}`")),
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classical radial density of the bouncing-particle ensemble
    #[command(subcommand)]
    Classical(ClassicalCommand),
    /// Quantum levels and radial densities
    #[command(subcommand)]
    Quantum(QuantumCommand),
    /// Distance between quantum total densities and the classical density
    Compare(CompareArgs),
    /// Special-function evaluation
    #[command(subcommand)]
    Specfun(SpecfunCommand),
}

#[derive(Debug, Subcommand)]
enum ClassicalCommand {
    /// Closed-form total density `r ln((1+r)/(1-r))`
    Analytic(AnalyticArgs),
    /// Monte Carlo histogram of sampled radii
    Mc(McArgs),
}

#[derive(Debug, Subcommand)]
enum QuantumCommand {
    /// Energy, allowed l and degeneracy weights of level n
    Level(LevelArgs),
    /// Radial density of one l, or the weighted total of a level
    Density(DensityArgs),
}

#[derive(Debug, Subcommand)]
enum SpecfunCommand {
    /// Evaluate j_l(x), n_l(x) or the k-th positive zero of j_l
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
struct CurveArgs {
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
    /// Optional SVG plot path
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    grid_points: usize,
}

#[derive(Debug, Args)]
struct AnalyticArgs {
    #[command(flatten)]
    curve: CurveArgs,
    /// Upper end of the grid; the density diverges at 1
    #[arg(long, default_value_t = 0.99)]
    r_max: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Paper,
    Liouville,
}

#[derive(Debug, Args)]
struct McArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Paper)]
    mode: ModeArg,
    #[arg(long)]
    samples: u64,
    #[arg(long, default_value_t = 100)]
    bins: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    r_max: f64,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
    /// Optional SVG plot path
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct LevelArgs {
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BranchArg {
    B,
    N0,
    H1,
    H2,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("which").required(true).args(["l", "total"])))]
struct DensityArgs {
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
    /// Mean density over the states of this l, or one state with --branch
    #[arg(long, allow_negative_numbers = true)]
    l: Option<i64>,
    /// Degeneracy-weighted total density of the level
    #[arg(long, conflicts_with = "branch")]
    total: bool,
    /// Radial solution: b = j_l, n0 = n_0, h1/h2 = Hankel functions (l = 0)
    #[arg(long, value_enum)]
    branch: Option<BranchArg>,
    #[command(flatten)]
    curve: CurveArgs,
    #[arg(long, default_value_t = 1.0)]
    r_max: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MetricArg {
    L1,
    Sup,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    n_list: Vec<i64>,
    /// Distance reported on stdout; the CSV carries both
    #[arg(long, value_enum, default_value_t = MetricArg::L1)]
    metric: MetricArg,
    #[command(flatten)]
    curve: CurveArgs,
    #[arg(long, default_value_t = 0.99)]
    r_max: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FnArg {
    J,
    N,
    Zero,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long = "fn", value_enum)]
    function: FnArg,
    #[arg(long, allow_negative_numbers = true)]
    l: i64,
    #[arg(long, allow_negative_numbers = true)]
    x: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    k: Option<i64>,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    let threads = match cli.threads {
        Some(t) => t,
        None => match std::env::var(THREADS_ENV) {
            Ok(value) => parse_threads(&value).map_err(|e| CliError::Usage(format!("{THREADS_ENV}: {e}")))?,
            Err(_) => Threads::Auto,
        },
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Threads::Count(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Numerical(format!("cannot start worker pool: {e}")))?;
    pool.install(|| dispatch(cli.command))
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Classical(ClassicalCommand::Analytic(args)) => classical_analytic(&args),
        Command::Classical(ClassicalCommand::Mc(args)) => classical_mc(&args),
        Command::Quantum(QuantumCommand::Level(args)) => quantum_level(&args),
        Command::Quantum(QuantumCommand::Density(args)) => quantum_density(&args),
        Command::Compare(args) => compare(&args),
        Command::Specfun(SpecfunCommand::Eval(args)) => specfun_eval(&args),
    }
}

fn grid(points: usize, r_max: f64) -> Result<RadialGrid> {
    if points < 2 {
        return Err(CliError::Usage(format!("--grid-points must be at least 2, got {points}")));
    }
    if !(r_max > 0.0 && r_max <= 1.0) {
        return Err(CliError::Usage(format!("--r-max must lie in (0, 1], got {r_max}")));
    }
    Ok(RadialGrid::uniform(points, r_max)?)
}

fn level_index(n: i64) -> Result<u32> {
    u32::try_from(n)
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::Usage(format!("--n must be a positive integer, got {n}")))
}

fn nonnegative(name: &str, v: i64) -> Result<u32> {
    u32::try_from(v).map_err(|_| CliError::Usage(format!("{name} must be a non-negative integer, got {v}")))
}

fn write_svg(path: Option<&Path>, title: &str, series: &[svg::Series]) -> Result<()> {
    match path {
        Some(path) => output::write_atomic(path, &svg::render(title, "r / a", "radial density", series)),
        None => Ok(()),
    }
}

fn curve_series(label: impl Into<String>, curve: &DensityCurve) -> svg::Series {
    svg::Series::new(label, curve.iter())
}

fn classical_analytic(args: &AnalyticArgs) -> Result<()> {
    if args.r_max >= 1.0 {
        return Err(CliError::Usage("--r-max must be below 1: the classical density diverges at the wall".into()));
    }
    let grid = grid(args.curve.grid_points, args.r_max)?;
    let curve = DensityCurve::from_fn(grid, |r| classical::classical_total_density(r).map_err(CliError::from))?;
    output::write_atomic(&args.curve.out, &output::curve_csv(&curve))?;
    write_svg(args.curve.svg.as_deref(), "classical total radial density", &[curve_series("classical", &curve)])
}

fn classical_mc(args: &McArgs) -> Result<()> {
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let mode = match args.mode {
        ModeArg::Paper => McMode::Paper,
        ModeArg::Liouville => McMode::Liouville,
    };
    let config = McConfig::new(mode, args.samples, args.bins, args.seed, args.r_max)?;
    let estimate = classical::mc_radial_density(&config)?;
    let mut csv = String::from("r_mid,density,count\n");
    for ((r, density), count) in estimate.curve.iter().zip(estimate.histogram.counts()) {
        let _ = writeln!(csv, "{},{},{count}", sig17(r), sig17(density));
    }
    output::write_atomic(&args.out, &csv)?;
    write_svg(args.svg.as_deref(), "Monte Carlo radial density", &[curve_series("Monte Carlo", &estimate.curve)])
}

fn level_report(n: u32) -> Result<String> {
    let spec = quantum::level_spec(n)?;
    let weights: Vec<String> = spec.weights.iter().map(|w| w.to_string()).collect();
    let mut report = String::new();
    let _ = writeln!(report, "n {}", spec.n);
    let _ = writeln!(report, "energy {}", sig17(spec.energy));
    let _ = writeln!(report, "l_max {}", spec.l_max);
    let _ = writeln!(report, "degeneracy {}", spec.degeneracy);
    let _ = writeln!(report, "weights {}", weights.join(","));
    Ok(report)
}

fn quantum_level(args: &LevelArgs) -> Result<()> {
    let report = level_report(level_index(args.n)?)?;
    match &args.out {
        Some(path) => output::write_atomic(path, &report),
        None => {
            print!("{report}");
            Ok(())
        }
    }
}

fn quantum_density(args: &DensityArgs) -> Result<()> {
    let n = level_index(args.n)?;
    let grid = grid(args.curve.grid_points, args.r_max)?;
    let (curve, title) = match args.l {
        None => {
            let total = TotalDensity::new(n)?;
            if grid.r_max() == 1.0 {
                let mass = numerics::integrate(|r| total.at(r).unwrap_or(f64::NAN), 0.0, 1.0, 1e-10)?;
                if !((mass - 1.0).abs() <= TOTAL_MASS_TOLERANCE) {
                    return Err(CliError::Numerical(format!("total density of level {n} has mass {mass}, expected 1")));
                }
            }
            (quantum::total_radial_density(n, &grid)?, format!("total radial density, n = {n}"))
        }
        Some(l) => {
            let l = nonnegative("--l", l)?;
            match args.branch {
                None => (quantum::mean_radial_density(n, l, &grid)?, format!("mean radial density, n = {n}, l = {l}")),
                Some(b) => {
                    let branch = match b {
                        BranchArg::B => Branch::J,
                        BranchArg::N0 => Branch::N0,
                        BranchArg::H1 => Branch::H1,
                        BranchArg::H2 => Branch::H2,
                    };
                    let state = RadialState::new(StateLabel::new(n, l, 0, branch)?)?;
                    (quantum::state_radial_density(&state, &grid)?, format!("{branch:?} state density, n = {n}, l = {l}"))
                }
            }
        }
    };
    output::write_atomic(&args.curve.out, &output::curve_csv(&curve))?;
    write_svg(args.curve.svg.as_deref(), &title, &[curve_series("quantum", &curve)])
}

fn compare(args: &CompareArgs) -> Result<()> {
    let mut levels: Vec<u32> = Vec::with_capacity(args.n_list.len());
    for &n in &args.n_list {
        let n = level_index(n)?;
        if levels.contains(&n) {
            eprintln!("warning: duplicate n = {n} ignored");
        } else {
            levels.push(n);
        }
    }
    if args.r_max >= 1.0 {
        return Err(CliError::Usage("--r-max must be below 1: the classical density diverges at the wall".into()));
    }
    let grid = grid(args.curve.grid_points, args.r_max)?;

    let mut csv = String::from("n,l_max,degeneracy,l1_distance,sup_distance\n");
    let mut series = Vec::new();
    let mut classical = None;
    for &n in &levels {
        let comparison = quantum::compare_with_classical(n, &grid)?;
        let report = &comparison.report;
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            report.n,
            report.l_max,
            report.degeneracy,
            sig17(report.l1_distance),
            sig17(report.sup_distance)
        );
        let distance = match args.metric {
            MetricArg::L1 => report.l1_distance,
            MetricArg::Sup => report.sup_distance,
        };
        println!("n {n} {:?} {}", args.metric, sig17(distance));
        output::write_atomic(&output::sibling_path(&args.curve.out, &format!("n{n}")), &output::curve_csv(&comparison.quantum))?;
        series.push(curve_series(format!("n = {n}"), &comparison.quantum));
        classical.get_or_insert(comparison.classical);
    }
    if let Some(classical) = &classical {
        output::write_atomic(&output::sibling_path(&args.curve.out, "classical"), &output::curve_csv(classical))?;
        series.push(curve_series("classical", classical));
    }
    output::write_atomic(&args.curve.out, &csv)?;
    write_svg(args.curve.svg.as_deref(), "quantum total densities vs classical", &series)
}

fn specfun_eval(args: &EvalArgs) -> Result<()> {
    let l = nonnegative("--l", args.l)?;
    let value = match (args.function, args.x, args.k) {
        (FnArg::J, Some(x), None) => specfun::sph_bessel_j(l, x)?,
        (FnArg::N, Some(x), None) => specfun::sph_bessel_n(l, x)?,
        (FnArg::Zero, None, Some(k)) => {
            let k = nonnegative("--k", k)?;
            specfun::sph_bessel_zero(l, k)?
        }
        (FnArg::Zero, _, _) => return Err(CliError::Usage("--fn zero takes --k and no --x".into())),
        _ => return Err(CliError::Usage("--fn j and --fn n take --x and no --k".into())),
    };
    println!("{}", sig17(value));
    Ok(())
}
