//! Absolute error and residual norms.
//!
//! L² norms use the composite trapezoidal rule on an equispaced grid over
//! `[0, 1]` that includes both endpoints (5000 points by default).

use crate::assembly::CollocationGrid;
use crate::error::{invalid, ElmError, Result};
use crate::fd::FdSolution;
use crate::par::{self, Execution};
use crate::problem::{BenchmarkCase, ExactSolution};
use crate::solver::ElmApproximant;

pub const DEFAULT_GRID_SIZE: usize = 5000;

/// Anything that can be compared against an exact solution.
pub trait Approximation: Sync {
    fn value(&self, x: f64) -> f64;

    /// Value with first and second derivative, when the representation has them.
    fn jet(&self, _x: f64) -> Option<(f64, f64, f64)> {
        None
    }
}

impl Approximation for ElmApproximant {
    fn value(&self, x: f64) -> f64 {
        ElmApproximant::value(self, x)
    }

    fn jet(&self, x: f64) -> Option<(f64, f64, f64)> {
        Some(ElmApproximant::jet(self, x))
    }
}

impl Approximation for FdSolution {
    fn value(&self, x: f64) -> f64 {
        FdSolution::value(self, x)
    }
}

impl Approximation for ExactSolution {
    fn value(&self, x: f64) -> f64 {
        ExactSolution::value(self, x)
    }

    fn jet(&self, x: f64) -> Option<(f64, f64, f64)> {
        Some((self.value(x), self.d1(x), self.d2(x)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub l2_error: f64,
    pub l2_residual: f64,
    pub linf_at_points: Option<f64>,
    pub eval_grid_size: usize,
}

fn eval_points(grid_size: usize) -> Result<Vec<f64>> {
    if grid_size < 2 {
        return Err(invalid("grid_size", format!("{grid_size} < 2")));
    }
    let last = (grid_size - 1) as f64;
    Ok((0..grid_size).map(|j| j as f64 / last).collect())
}

/// Trapezoidal `(∫ v²)^{1/2}` for samples on the equispaced grid.
fn trapezoid_l2(samples: &[f64]) -> f64 {
    let h = 1.0 / (samples.len() - 1) as f64;
    let n = samples.len();
    let inner: f64 = samples[1..n - 1].iter().map(|v| v * v).sum();
    let ends = 0.5 * (samples[0] * samples[0] + samples[n - 1] * samples[n - 1]);
    (h * (inner + ends)).sqrt()
}

fn check_finite(what: &'static str, xs: &[f64], vs: &[f64]) -> Result<()> {
    match xs.iter().zip(vs).find(|(_, v)| !v.is_finite()) {
        Some((&x, &value)) => Err(ElmError::NonFinite { what, x, value }),
        None => Ok(()),
    }
}

/// L² norm of `f` on `[0, 1]` by the trapezoidal rule on `grid_size` points.
pub fn l2_norm<F>(f: F, grid_size: usize) -> Result<f64>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    l2_norm_with(f, grid_size, Execution::default())
}

pub fn l2_norm_with<F>(f: F, grid_size: usize, exec: Execution) -> Result<f64>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let xs = eval_points(grid_size)?;
    let vs = par::map(exec, &xs, |&x| f(x));
    check_finite("integrand", &xs, &vs)?;
    Ok(trapezoid_l2(&vs))
}

/// `‖u - ũ‖_{L²}`; works for any approximation.
pub fn l2_error(
    case: &BenchmarkCase,
    approx: &impl Approximation,
    grid_size: usize,
) -> Result<f64> {
    l2_norm(|x| case.exact.value(x) - approx.value(x), grid_size)
}

/// Error and PDE residual norms. Needs derivatives, so finite-difference
/// solutions are rejected; use [`l2_error`] for those.
pub fn error_report(
    case: &BenchmarkCase,
    approx: &impl Approximation,
    grid_size: usize,
) -> Result<ErrorReport> {
    error_report_with(case, approx, grid_size, Execution::default())
}

pub fn error_report_with(
    case: &BenchmarkCase,
    approx: &impl Approximation,
    grid_size: usize,
    exec: Execution,
) -> Result<ErrorReport> {
    let xs = eval_points(grid_size)?;
    if approx.jet(0.5).is_none() {
        return Err(ElmError::Unsupported(
            "residual needs second derivatives; piecewise-linear solutions have none".into(),
        ));
    }
    let bvp = &case.bvp;
    let pairs = par::map(exec, &xs, |&x| {
        let (u, du, d2u) = approx.jet(x).unwrap_or((f64::NAN, f64::NAN, f64::NAN));
        let err = case.exact.value(x) - u;
        let res = bvp.forcing(x) - bvp.apply(u, du, d2u);
        (err, res)
    });
    let (errs, ress): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    check_finite("pointwise error", &xs, &errs)?;
    check_finite("residual", &xs, &ress)?;
    Ok(ErrorReport {
        l2_error: trapezoid_l2(&errs),
        l2_residual: trapezoid_l2(&ress),
        linf_at_points: None,
        eval_grid_size: grid_size,
    })
}

/// `max_j |u(x_j) - ũ(x_j)|` over the collocation points.
pub fn linf_at_collocation(
    case: &BenchmarkCase,
    approx: &impl Approximation,
    grid: &CollocationGrid,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &x in grid.points() {
        let e = (case.exact.value(x) - approx.value(x)).abs();
        if !e.is_finite() {
            return Err(ElmError::NonFinite {
                what: "pointwise error",
                x,
                value: e,
            });
        }
        worst = worst.max(e);
    }
    Ok(worst)
}
