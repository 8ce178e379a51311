//! Minimum-norm least-squares solve of the collocation system.
//!
//! The system may be square, over- or under-determined. All three cases go
//! through one truncated SVD: singular values below the cutoff are dropped and
//! the solution lives in the span of the retained right singular vectors, so it
//! is the minimum-norm minimizer of `‖Aw - b‖₂` restricted to that subspace.

use nalgebra::{DMatrix, DVector};

use crate::assembly::CollocationSystem;
use crate::basis::SigmoidBasis;
use crate::error::{invalid, ElmError, Result};

/// Singular-value cutoff rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    /// `max(M, n) · ε · σ_max`.
    Default,
    /// `r · σ_max`.
    Relative(f64),
    /// A fixed absolute cutoff.
    Absolute(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub truncation: Truncation,
    /// Keep at most this many singular values.
    pub max_rank: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            truncation: Truncation::Default,
            max_rank: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ElmSolution {
    pub weights: DVector<f64>,
    pub algebraic_residual: f64,
    pub effective_rank: usize,
    pub truncation_tol: f64,
    pub condition_estimate: f64,
    /// All singular values in descending order, retained or not.
    pub singular_values: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl ElmSolution {
    /// True when fewer than `min(M, n)` singular values were kept.
    pub fn rank_deficient(&self) -> bool {
        self.effective_rank < self.rows.min(self.cols)
    }
}

pub fn solve(system: &CollocationSystem) -> Result<ElmSolution> {
    solve_with(system, &SolveOptions::default())
}

pub fn solve_with(system: &CollocationSystem, opts: &SolveOptions) -> Result<ElmSolution> {
    least_squares(&system.matrix, &system.rhs, opts)
}

/// Minimum-norm least-squares solution of `A w ≈ b` via truncated SVD.
pub fn least_squares(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    opts: &SolveOptions,
) -> Result<ElmSolution> {
    let (m, n) = a.shape();
    if b.len() != m {
        return Err(ElmError::Dimension(format!(
            "matrix has {m} rows but right-hand side has {} entries",
            b.len()
        )));
    }
    if m == 0 || n == 0 {
        return Err(ElmError::Dimension("empty matrix".into()));
    }
    if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
        return Err(ElmError::NonFiniteMatrix);
    }

    // Factor the tall orientation; for wide A use Aᵀ = U Σ Vᵀ so A = V Σ Uᵀ.
    let wide = m < n;
    let svd = if wide {
        a.transpose().svd(true, true)
    } else {
        a.clone().svd(true, true)
    };
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    let sv = &svd.singular_values;

    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&i, &j| sv[j].total_cmp(&sv[i]));
    let sigma_max = sv[order[0]];

    let tol = match opts.truncation {
        Truncation::Default => m.max(n) as f64 * f64::EPSILON * sigma_max,
        Truncation::Relative(r) => {
            if !(r >= 0.0 && r.is_finite()) {
                return Err(invalid(
                    "svd_tol",
                    format!("{r} must be a non-negative number"),
                ));
            }
            r * sigma_max
        }
        Truncation::Absolute(t) => {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(invalid(
                    "svd_tol",
                    format!("{t} must be a non-negative number"),
                ));
            }
            t
        }
    };
    let limit = opts.max_rank.unwrap_or(usize::MAX);
    let kept: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&k| sv[k] > tol && sv[k] > 0.0)
        .take(limit)
        .collect();

    let mut weights = DVector::zeros(n);
    for &k in &kept {
        // coefficient along the k-th singular triple: (left_kᵀ b) / σ_k
        let coeff = if wide {
            v_t.row(k).transpose().dot(b) / sv[k]
        } else {
            u.column(k).dot(b) / sv[k]
        };
        if wide {
            weights.axpy(coeff, &u.column(k), 1.0);
        } else {
            weights.axpy(coeff, &v_t.row(k).transpose(), 1.0);
        }
    }

    let residual = (a * &weights - b).norm();
    let condition = match (kept.first(), kept.last()) {
        (Some(&hi), Some(&lo)) => sv[hi] / sv[lo],
        _ => f64::INFINITY,
    };

    Ok(ElmSolution {
        weights,
        algebraic_residual: residual,
        effective_rank: kept.len(),
        truncation_tol: tol,
        condition_estimate: condition,
        singular_values: order.iter().map(|&k| sv[k]).collect(),
        rows: m,
        cols: n,
    })
}

/// `ũ(x) = Σ wᵢ σᵢ(x)` with derivatives.
#[derive(Debug, Clone)]
pub struct ElmApproximant {
    basis: SigmoidBasis,
    weights: Vec<f64>,
}

impl ElmApproximant {
    pub fn new(basis: SigmoidBasis, weights: Vec<f64>) -> Result<Self> {
        if basis.len() != weights.len() {
            return Err(ElmError::Dimension(format!(
                "{} weights for {} neurons",
                weights.len(),
                basis.len()
            )));
        }
        Ok(ElmApproximant { basis, weights })
    }

    pub fn from_solution(basis: SigmoidBasis, solution: &ElmSolution) -> Result<Self> {
        Self::new(basis, solution.weights.iter().copied().collect())
    }

    pub fn basis(&self) -> &SigmoidBasis {
        &self.basis
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn value(&self, x: f64) -> f64 {
        self.jet(x).0
    }

    /// `(ũ(x), ũ'(x), ũ''(x))`.
    pub fn jet(&self, x: f64) -> (f64, f64, f64) {
        let mut acc = (0.0, 0.0, 0.0);
        for (i, &w) in self.weights.iter().enumerate() {
            let (s, d1, d2) = self.basis.jet(i, x);
            acc.0 += w * s;
            acc.1 += w * d1;
            acc.2 += w * d2;
        }
        acc
    }
}
