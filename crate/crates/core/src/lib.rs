//! Extreme-learning-machine collocation for linear boundary-value problems on
//! `[0, 1]` whose solutions have boundary or internal layers.
//!
//! The approximation is a linear combination of `n` sigmoids whose slopes and
//! centers are drawn at random and then frozen. Only the output weights are
//! computed, by collocating the equation at `M` equispaced points and solving
//! the resulting (usually under-determined) least-squares system for its
//! minimum-norm solution.
//!
//! ```no_run
//! use elm_core::{assemble, error_report, solve, sin_bump, CollocationGrid, ElmApproximant, Interval, SigmoidBasis};
//!
//! let case = sin_bump(1)?;
//! let basis = SigmoidBasis::sample(80, Interval::UNIT, 7)?;
//! let grid = CollocationGrid::uniform(40)?;
//! let system = assemble(&case.bvp, &basis, &grid)?;
//! let solution = solve(&system)?;
//! let u = ElmApproximant::from_solution(basis, &solution)?;
//! let report = error_report(&case, &u, 5000)?;
//! println!("L2 error {:e}", report.l2_error);
//! # Ok::<(), elm_core::ElmError>(())
//! ```

pub mod assembly;
pub mod basis;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod fd;
pub mod metrics;
pub mod par;
pub mod problem;
pub mod solver;

pub use assembly::{assemble, assemble_with, CollocationGrid, CollocationSystem, RowKind};
pub use basis::{alpha_bound, Derivative, Interval, SShapeInterval, SigmoidBasis};
pub use error::{ElmError, Result};
pub use experiments::{
    run_peclet_sweep, run_single, run_sweep, MRule, PecletKind, RunMetrics, RunSettings,
    SweepConfig, SweepRecord,
};
pub use fd::{fd_weights, solve_fd, FdSolution, StencilWeights};
pub use metrics::{
    error_report, l2_error, l2_norm, linf_at_collocation, Approximation, ErrorReport,
};
pub use par::Execution;
pub use problem::{
    advection_layer, atan_layer, comb, gaussian_peak, peclet, polynomial, reaction_layer, sin_bump,
    BenchmarkCase, BenchmarkKind, ExactSolution, LinearBvp, Peclet, PecletRegime, RobinBc,
};
pub use solver::{
    least_squares, solve, solve_with, ElmApproximant, ElmSolution, SolveOptions, Truncation,
};
