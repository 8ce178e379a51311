//! Command-line front end: `solve`, `sweep`, `peclet` and `fd-compare`.
//!
//! Exit codes: 0 on success, 2 for invalid invocations (bad flags, unknown
//! problem, invalid parameters), 1 when a run fails after configuration.
//! Output files are written through a temporary file and renamed into place.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::ElmError;
use crate::experiments::{
    run_peclet_sweep, run_single, run_sweep, MRule, PecletKind, RunSettings, SweepConfig,
    SweepRecord,
};
use crate::metrics::DEFAULT_GRID_SIZE;
use crate::par::{init_thread_pool, Execution};
use crate::problem::BenchmarkCase;
use crate::solver::{SolveOptions, Truncation};

/// Columns of the sweep CSV.
pub const SWEEP_HEADER: [&str; 12] = [
    "case",
    "n",
    "M",
    "seed",
    "l2_error",
    "l2_residual",
    "linf_points",
    "fd_l2_error",
    "effective_rank",
    "condition_estimate",
    "wall_time_s",
    "status",
];

/// Columns of the solution-curve CSV written by `solve`.
pub const CURVE_HEADER: [&str; 4] = ["x", "u_approx", "u_exact", "abs_error"];

/// Number of equispaced samples in the solution curve.
pub const CURVE_POINTS: usize = 1001;

/// Environment variable capping the worker-thread count.
pub const THREADS_ENV: &str = "ELM_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "elm",
    version,
    about = "ELM collocation for 1D boundary-value problems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one problem and write the sampled solution curve.
    Solve(SolveArgs),
    /// Run an n/M/seed sweep and write one CSV row per run.
    Sweep(SweepArgs),
    /// Sweep the advection or reaction coefficient of the layer problems.
    Peclet(PecletArgs),
    /// Sweep with the finite-difference reference enabled.
    FdCompare(SweepArgs),
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// Benchmark name.
    #[arg(long)]
    pub problem: String,
    /// Extra parameters as key=value (repeatable).
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub x0: Option<String>,
    #[arg(long)]
    pub eps: Option<String>,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
    /// Points of the trapezoidal L2 evaluation grid.
    #[arg(long, default_value_t = DEFAULT_GRID_SIZE)]
    pub grid_size: usize,
    /// Relative singular-value cutoff (default max(M,n)·eps).
    #[arg(long)]
    pub svd_tol: Option<f64>,
    /// Run everything on the calling thread.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long)]
    pub n: usize,
    #[arg(long, conflicts_with = "m_ratio")]
    pub m: Option<usize>,
    #[arg(long)]
    pub m_ratio: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Neuron counts, strictly increasing (default 10,20,…,1280).
    #[arg(long, value_delimiter = ',')]
    pub n_list: Vec<usize>,
    #[arg(long, conflicts_with_all = ["m_ratio", "m_list"])]
    pub m: Option<usize>,
    #[arg(long, conflicts_with = "m_list")]
    pub m_ratio: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub m_list: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub seeds: Vec<u64>,
    /// Also solve the finite-difference reference on the same M.
    #[arg(long)]
    pub fd: bool,
    /// Leave wall_time_s empty so output is byte-for-byte reproducible.
    #[arg(long)]
    pub omit_timing: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PecletKindArg {
    Advection,
    Reaction,
}

#[derive(Debug, Args)]
pub struct PecletArgs {
    #[arg(long, value_enum)]
    pub kind: PecletKindArg,
    /// Neuron count (even; M = n/2).
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub seeds: Vec<u64>,
    #[arg(long)]
    pub omit_timing: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug)]
enum CliError {
    Config(String),
    Runtime(String),
}

impl From<ElmError> for CliError {
    fn from(e: ElmError) -> Self {
        match e {
            ElmError::InvalidParameter { .. } | ElmError::UnknownProblem(_) => {
                CliError::Config(e.to_string())
            }
            other => CliError::Runtime(other.to_string()),
        }
    }
}

/// Parses `argv` (including the program name), runs the command, returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Ok(v) = std::env::var(THREADS_ENV) {
        match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => {
                init_thread_pool(t);
            }
            _ => {
                eprintln!("error: {THREADS_ENV}={v:?} is not a positive integer");
                return 2;
            }
        }
    }
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Solve(args) => cmd_solve(args),
        Command::Sweep(args) => cmd_sweep(args, false),
        Command::FdCompare(args) => cmd_sweep(args, true),
        Command::Peclet(args) => cmd_peclet(args),
    }
}

/// Parses a number, also accepting a fraction such as `4/9`.
pub fn parse_number(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let (num, den) = (
            num.trim().parse::<f64>().ok()?,
            den.trim().parse::<f64>().ok()?,
        );
        return (den != 0.0).then(|| num / den);
    }
    s.parse::<f64>().ok()
}

fn problem_params(args: &ProblemArgs) -> Result<BTreeMap<String, f64>, CliError> {
    let mut out = BTreeMap::new();
    let named = [
        ("k", &args.k),
        ("p", &args.p),
        ("mu", &args.mu),
        ("gamma", &args.gamma),
        ("lambda", &args.lambda),
        ("alpha", &args.alpha),
        ("x0", &args.x0),
        ("eps", &args.eps),
    ];
    let mut put = |key: &str, raw: &str| -> Result<(), CliError> {
        let v = parse_number(raw).filter(|v| v.is_finite()).ok_or_else(|| {
            CliError::Config(format!("parameter `{key}`: `{raw}` is not a number"))
        })?;
        out.insert(key.to_string(), v);
        Ok(())
    };
    for (key, val) in named {
        if let Some(raw) = val {
            put(key, raw)?;
        }
    }
    for kv in &args.params {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("--param `{kv}` is not KEY=VALUE")))?;
        put(k.trim(), v)?;
    }
    Ok(out)
}

fn solve_options(common: &CommonArgs) -> SolveOptions {
    SolveOptions {
        truncation: common
            .svd_tol
            .map_or(Truncation::Default, Truncation::Relative),
        max_rank: None,
    }
}

fn execution(common: &CommonArgs) -> Execution {
    if common.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn check_ratio(r: f64) -> Result<f64, CliError> {
    if r > 0.0 && r.is_finite() {
        Ok(r)
    } else {
        Err(CliError::Config(format!("--m-ratio {r} must be positive")))
    }
}

fn cmd_solve(args: SolveArgs) -> Result<(), CliError> {
    let params = problem_params(&args.problem)?;
    let case = BenchmarkCase::from_name(&args.problem.problem, &params)?;
    if args.n == 0 {
        return Err(CliError::Config("--n must be positive".into()));
    }
    let m = match (args.m, args.m_ratio) {
        (Some(m), _) => m,
        (None, Some(r)) => (check_ratio(r)? * args.n as f64).round() as usize,
        (None, None) => args.n / 2,
    };
    if m < 3 {
        return Err(CliError::Config(format!("M = {m} < 3")));
    }
    let settings = RunSettings {
        include_fd: false,
        grid_size: args.common.grid_size,
        solve: solve_options(&args.common),
        execution: execution(&args.common),
    };
    if settings.grid_size < 2 {
        return Err(CliError::Config("--grid-size must be at least 2".into()));
    }
    let (metrics, approx) = run_single(&case, args.n, m, args.seed, &settings)?;

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CURVE_HEADER).map_err(io_err)?;
    let last = (CURVE_POINTS - 1) as f64;
    for j in 0..CURVE_POINTS {
        let x = j as f64 / last;
        let u = approx.value(x);
        let exact = case.exact.value(x);
        w.write_record([
            fmt_f64(x),
            fmt_f64(u),
            fmt_f64(exact),
            fmt_f64((u - exact).abs()),
        ])
        .map_err(io_err)?;
    }
    write_atomic(
        &args.common.out,
        &w.into_inner().map_err(|e| io_err(e.into_error()))?,
    )?;

    println!(
        "case={} n={} M={} seed={} l2_error={} l2_residual={} linf_points={} effective_rank={} condition_estimate={} wall_time_s={}",
        case.name(),
        args.n,
        m,
        args.seed,
        fmt_f64(metrics.l2_error),
        fmt_f64(metrics.l2_residual),
        fmt_f64(metrics.linf_points),
        metrics.effective_rank,
        fmt_f64(metrics.condition_estimate),
        fmt_f64(metrics.wall_time_seconds),
    );
    if metrics.rank_deficient {
        eprintln!(
            "warning: effective rank {} < min(M, n) = {}",
            metrics.effective_rank,
            m.min(args.n)
        );
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs, force_fd: bool) -> Result<(), CliError> {
    let params = problem_params(&args.problem)?;
    let m_rule = match (args.m, args.m_ratio, args.m_list.is_empty()) {
        (Some(m), _, _) => MRule::Fixed(m),
        (None, Some(r), _) => MRule::Ratio(check_ratio(r)?),
        (None, None, false) => MRule::List(args.m_list.clone()),
        (None, None, true) => MRule::default(),
    };
    let mut config = SweepConfig::new(args.problem.problem.clone())
        .m_rule(m_rule)
        .seeds(args.seeds.clone())
        .include_fd(args.fd || force_fd)
        .execution(execution(&args.common));
    config.params = params;
    if !args.n_list.is_empty() {
        config.n_list = args.n_list.clone();
    }
    config.grid_size = args.common.grid_size;
    config.solve = solve_options(&args.common);
    if config.grid_size < 2 {
        return Err(CliError::Config("--grid-size must be at least 2".into()));
    }
    let records = run_sweep(&config)?;
    let bytes = sweep_csv(&records, !args.omit_timing, false).map_err(io_err)?;
    write_atomic(&args.common.out, &bytes)?;
    report_failures(&records);
    Ok(())
}

fn cmd_peclet(args: PecletArgs) -> Result<(), CliError> {
    let kind = match args.kind {
        PecletKindArg::Advection => PecletKind::Advection,
        PecletKindArg::Reaction => PecletKind::Reaction,
    };
    let settings = RunSettings {
        include_fd: false,
        grid_size: args.common.grid_size,
        solve: solve_options(&args.common),
        execution: execution(&args.common),
    };
    if settings.grid_size < 2 {
        return Err(CliError::Config("--grid-size must be at least 2".into()));
    }
    let records = run_peclet_sweep(kind, args.n, &args.seeds, &settings)?;
    let bytes = sweep_csv(&records, !args.omit_timing, true).map_err(io_err)?;
    write_atomic(&args.common.out, &bytes)?;
    report_failures(&records);
    Ok(())
}

fn report_failures(records: &[SweepRecord]) {
    let failed = records.iter().filter(|r| r.metrics().is_none()).count();
    if failed > 0 {
        eprintln!(
            "warning: {failed} of {} runs failed (see status column)",
            records.len()
        );
    }
}

/// Shortest round-trip decimal; scientific notation outside `[1e-4, 1e15)`.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Serializes sweep records. Péclet sweeps append `coefficient,peclet` columns.
pub fn sweep_csv(
    records: &[SweepRecord],
    timing: bool,
    peclet_columns: bool,
) -> csv::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = SWEEP_HEADER.to_vec();
    if peclet_columns {
        header.extend(["coefficient", "peclet"]);
    }
    w.write_record(&header)?;
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    for r in records {
        let m = r.metrics();
        let mut row = vec![
            r.case.clone(),
            r.n.to_string(),
            r.m.to_string(),
            r.seed.to_string(),
            opt(m.map(|m| m.l2_error)),
            opt(m.map(|m| m.l2_residual)),
            opt(m.map(|m| m.linf_points)),
            opt(m.and_then(|m| m.fd_l2_error)),
            m.map(|m| m.effective_rank.to_string()).unwrap_or_default(),
            opt(m.map(|m| m.condition_estimate)),
            if timing {
                opt(m.map(|m| m.wall_time_seconds))
            } else {
                String::new()
            },
            r.status(),
        ];
        if peclet_columns {
            row.push(opt(r.coefficient));
            row.push(opt(r.peclet));
        }
        w.write_record(&row)?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

fn io_err(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Writes `bytes` to a temporary file beside `path`, then renames it over `path`.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::Config(format!("cannot write to {}: {e}", dir.display())))?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.flush().map_err(io_err)?;
    tmp.persist(path)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {}", path.display(), e.error)))?;
    Ok(())
}
