//! Convergence sweeps over neuron counts, collocation counts and seeds.
//!
//! Every run is `sample → assemble → solve → measure`. Runs are independent;
//! the basis for a run depends only on `(seed, n)`, so records are identical
//! whether the sweep executes in parallel or serially.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::assembly::{assemble_with, CollocationGrid};
use crate::basis::{Interval, SigmoidBasis};
use crate::error::{invalid, Result};
use crate::fd::solve_fd;
use crate::metrics::{error_report_with, l2_error, linf_at_collocation, DEFAULT_GRID_SIZE};
use crate::par::{self, Execution};
use crate::problem::{advection_layer, peclet, reaction_layer, BenchmarkCase};
use crate::solver::{solve_with, ElmApproximant, SolveOptions};

/// Advection coefficients `γ` of the Péclet study.
pub const PECLET_GAMMAS: [f64; 10] = [0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0];
/// Reaction coefficients `λ` of the Péclet study.
pub const PECLET_LAMBDAS: [f64; 10] =
    [0.0, 3.0, 6.0, 15.0, 30.0, 60.0, 150.0, 300.0, 600.0, 1500.0];

/// `10, 20, 40, …, 1280`.
pub fn default_n_list() -> Vec<usize> {
    (0..8).map(|k| 10 << k).collect()
}

/// How the number of collocation points follows from `n`.
#[derive(Debug, Clone, PartialEq)]
pub enum MRule {
    Fixed(usize),
    /// `M = round(r · n)`.
    Ratio(f64),
    List(Vec<usize>),
}

impl Default for MRule {
    fn default() -> Self {
        MRule::Ratio(0.5)
    }
}

impl MRule {
    pub fn values(&self, n: usize) -> Vec<usize> {
        match self {
            MRule::Fixed(m) => vec![*m],
            MRule::Ratio(r) => vec![(r * n as f64).round() as usize],
            MRule::List(ms) => ms.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub case: String,
    pub params: BTreeMap<String, f64>,
    pub n_list: Vec<usize>,
    pub m_rule: MRule,
    pub seeds: Vec<u64>,
    pub include_fd: bool,
    pub grid_size: usize,
    pub solve: SolveOptions,
    pub execution: Execution,
}

impl SweepConfig {
    pub fn new(case: impl Into<String>) -> Self {
        SweepConfig {
            case: case.into(),
            params: BTreeMap::new(),
            n_list: default_n_list(),
            m_rule: MRule::default(),
            seeds: vec![1],
            include_fd: false,
            grid_size: DEFAULT_GRID_SIZE,
            solve: SolveOptions::default(),
            execution: Execution::default(),
        }
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn n_list(mut self, n_list: impl Into<Vec<usize>>) -> Self {
        self.n_list = n_list.into();
        self
    }

    pub fn m_rule(mut self, rule: MRule) -> Self {
        self.m_rule = rule;
        self
    }

    pub fn seeds(mut self, seeds: impl Into<Vec<u64>>) -> Self {
        self.seeds = seeds.into();
        self
    }

    pub fn include_fd(mut self, on: bool) -> Self {
        self.include_fd = on;
        self
    }

    pub fn execution(mut self, exec: Execution) -> Self {
        self.execution = exec;
        self
    }

    pub fn settings(&self) -> RunSettings {
        RunSettings {
            include_fd: self.include_fd,
            grid_size: self.grid_size,
            solve: self.solve,
            execution: self.execution,
        }
    }

    /// All `(n, M, seed)` triples, sorted.
    pub fn jobs(&self) -> Result<Vec<(usize, usize, u64)>> {
        if self.n_list.is_empty() {
            return Err(invalid("n_list", "no neuron counts given"));
        }
        if self.n_list.contains(&0) {
            return Err(invalid("n_list", "neuron counts must be positive"));
        }
        if self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("n_list", "must be strictly increasing"));
        }
        if self.seeds.is_empty() {
            return Err(invalid("seeds", "at least one seed is required"));
        }
        if let MRule::Ratio(r) = self.m_rule {
            if !(r > 0.0 && r.is_finite()) {
                return Err(invalid("m_ratio", format!("{r} must be positive")));
            }
        }
        let mut jobs = Vec::new();
        for &n in &self.n_list {
            for m in self.m_rule.values(n) {
                if m < 3 {
                    return Err(invalid("M", format!("n = {n} gives M = {m} < 3")));
                }
                for &seed in &self.seeds {
                    jobs.push((n, m, seed));
                }
            }
        }
        jobs.sort_unstable();
        jobs.dedup();
        Ok(jobs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics {
    pub l2_error: f64,
    pub l2_residual: f64,
    pub linf_points: f64,
    pub fd_l2_error: Option<f64>,
    pub effective_rank: usize,
    pub condition_estimate: f64,
    pub wall_time_seconds: f64,
    pub rank_deficient: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub case: String,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    /// Swept coefficient (`γ` or `λ`) in a Péclet sweep.
    pub coefficient: Option<f64>,
    pub peclet: Option<f64>,
    /// `Err` holds the failure message of a run that did not complete.
    pub outcome: std::result::Result<RunMetrics, String>,
}

impl SweepRecord {
    pub fn metrics(&self) -> Option<&RunMetrics> {
        self.outcome.as_ref().ok()
    }

    pub fn status(&self) -> String {
        match &self.outcome {
            Ok(m) if m.rank_deficient => "rank_deficient".into(),
            Ok(_) => "ok".into(),
            Err(e) => format!("failed: {e}"),
        }
    }
}

/// Settings shared by every run of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub include_fd: bool,
    pub grid_size: usize,
    pub solve: SolveOptions,
    pub execution: Execution,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            include_fd: false,
            grid_size: DEFAULT_GRID_SIZE,
            solve: SolveOptions::default(),
            execution: Execution::default(),
        }
    }
}

/// One full pipeline run for a given case.
pub fn run_single(
    case: &BenchmarkCase,
    n: usize,
    m: usize,
    seed: u64,
    settings: &RunSettings,
) -> Result<(RunMetrics, ElmApproximant)> {
    let exec = settings.execution;
    let grid_size = settings.grid_size;
    let start = Instant::now();
    let basis = SigmoidBasis::sample(n, Interval::UNIT, seed)?;
    let grid = CollocationGrid::uniform(m)?;
    let system = assemble_with(&case.bvp, &basis, &grid, exec)?;
    let solution = solve_with(&system, &settings.solve)?;
    let approx = ElmApproximant::from_solution(basis, &solution)?;
    let wall = start.elapsed().as_secs_f64();

    let report = error_report_with(case, &approx, grid_size, exec)?;
    let linf = linf_at_collocation(case, &approx, &grid)?;
    let fd_l2_error = if settings.include_fd && m >= 8 && case.bvp.is_dirichlet() {
        solve_fd(&case.bvp, m)
            .and_then(|fd| l2_error(case, &fd, grid_size))
            .ok()
    } else {
        None
    };
    let metrics = RunMetrics {
        l2_error: report.l2_error,
        l2_residual: report.l2_residual,
        linf_points: linf,
        fd_l2_error,
        effective_rank: solution.effective_rank,
        condition_estimate: solution.condition_estimate,
        wall_time_seconds: wall,
        rank_deficient: solution.rank_deficient(),
    };
    Ok((metrics, approx))
}

/// Runs every `(n, M, seed)` combination of the config.
///
/// Configuration errors are returned; failures of individual runs are kept
/// in the corresponding record.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    let case = BenchmarkCase::from_name(&config.case, &config.params)?;
    let jobs = config.jobs()?;
    let records = par::map(config.execution, &jobs, |&(n, m, seed)| {
        let outcome = run_single(&case, n, m, seed, &config.settings())
            .map(|(metrics, _)| metrics)
            .map_err(|e| e.to_string());
        SweepRecord {
            case: case.name().to_string(),
            n,
            m,
            seed,
            coefficient: None,
            peclet: None,
            outcome,
        }
    });
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PecletKind {
    Advection,
    Reaction,
}

impl PecletKind {
    pub fn coefficients(self) -> &'static [f64; 10] {
        match self {
            PecletKind::Advection => &PECLET_GAMMAS,
            PecletKind::Reaction => &PECLET_LAMBDAS,
        }
    }

    fn case(self, coefficient: f64) -> Result<BenchmarkCase> {
        match self {
            PecletKind::Advection => advection_layer(1.0, coefficient),
            PecletKind::Reaction => reaction_layer(1.0, coefficient),
        }
    }
}

/// Boundary-layer errors across the Péclet coefficient lists with `M = n/2`, `μ = 1`.
pub fn run_peclet_sweep(
    kind: PecletKind,
    n: usize,
    seeds: &[u64],
    settings: &RunSettings,
) -> Result<Vec<SweepRecord>> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(invalid(
            "n",
            format!("{n} must be positive and even (M = n/2)"),
        ));
    }
    let m = n / 2;
    if m < 3 {
        return Err(invalid("n", format!("M = {m} < 3")));
    }
    if seeds.is_empty() {
        return Err(invalid("seeds", "at least one seed is required"));
    }
    let mut jobs = Vec::new();
    for (ci, &c) in kind.coefficients().iter().enumerate() {
        for &seed in seeds {
            jobs.push((ci, c, seed));
        }
    }
    let settings = RunSettings {
        include_fd: false,
        ..*settings
    };
    let records = par::map(settings.execution, &jobs, |&(_, coefficient, seed)| {
        let run = kind.case(coefficient).and_then(|case| {
            let pe = peclet(&case.bvp)?.value;
            let (metrics, _) = run_single(&case, n, m, seed, &settings)?;
            Ok((case.name(), pe, metrics))
        });
        let (name, pe, outcome) = match run {
            Ok((name, pe, metrics)) => (name, Some(pe), Ok(metrics)),
            Err(e) => (
                match kind {
                    PecletKind::Advection => "advection_layer",
                    PecletKind::Reaction => "reaction_layer",
                },
                None,
                Err(e.to_string()),
            ),
        };
        SweepRecord {
            case: name.to_string(),
            n,
            m,
            seed,
            coefficient: Some(coefficient),
            peclet: pe,
            outcome,
        }
    });
    Ok(records)
}

/// Median of a non-empty slice (mean of the middle pair for even lengths).
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    })
}

/// Median L² error of the completed runs for each `(n, M)`.
pub fn median_l2_by_size(records: &[SweepRecord]) -> BTreeMap<(usize, usize), f64> {
    let mut groups: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    for r in records {
        if let Some(m) = r.metrics() {
            groups.entry((r.n, r.m)).or_default().push(m.l2_error);
        }
    }
    groups
        .into_iter()
        .filter_map(|(k, v)| median(&v).map(|med| (k, med)))
        .collect()
}
