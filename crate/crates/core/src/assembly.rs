//! Collocation system `[S; B] w = [f; g]`.
//!
//! Interior rows apply the differential operator to every neuron at the
//! interior grid points; the last two rows impose the left and right boundary
//! conditions.

use nalgebra::{DMatrix, DVector};

use crate::basis::SigmoidBasis;
use crate::error::{invalid, ElmError, Result};
use crate::par::{self, Execution};
use crate::problem::{LinearBvp, RobinBc};

/// Equispaced points `0 = x₁ < … < x_M = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocationGrid {
    points: Vec<f64>,
}

impl CollocationGrid {
    /// `m` equispaced points including both endpoints; needs `m >= 3`.
    pub fn uniform(m: usize) -> Result<Self> {
        if m < 3 {
            return Err(invalid("M", format!("{m} < 3 leaves no interior point")));
        }
        let last = (m - 1) as f64;
        let points = (0..m).map(|j| j as f64 / last).collect();
        Ok(CollocationGrid { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn interior(&self) -> &[f64] {
        &self.points[1..self.points.len() - 1]
    }

    pub fn spacing(&self) -> f64 {
        1.0 / (self.points.len() - 1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Interior,
    BoundaryLeft,
    BoundaryRight,
}

#[derive(Debug, Clone)]
pub struct CollocationSystem {
    pub matrix: DMatrix<f64>,
    pub rhs: DVector<f64>,
    pub row_kind: Vec<RowKind>,
    pub grid: CollocationGrid,
}

impl CollocationSystem {
    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    /// Abscissa that row `r` is attached to.
    pub fn row_point(&self, r: usize) -> f64 {
        match self.row_kind[r] {
            RowKind::Interior => self.grid.points()[r + 1],
            RowKind::BoundaryLeft => 0.0,
            RowKind::BoundaryRight => 1.0,
        }
    }
}

/// Builds the collocation matrix and right-hand side.
pub fn assemble(
    bvp: &LinearBvp,
    basis: &SigmoidBasis,
    grid: &CollocationGrid,
) -> Result<CollocationSystem> {
    assemble_with(bvp, basis, grid, Execution::default())
}

pub fn assemble_with(
    bvp: &LinearBvp,
    basis: &SigmoidBasis,
    grid: &CollocationGrid,
    exec: Execution,
) -> Result<CollocationSystem> {
    let domain = basis.domain();
    if domain.lo != 0.0 || domain.hi != 1.0 {
        return Err(invalid(
            "basis",
            format!("basis domain [{}, {}] is not [0, 1]", domain.lo, domain.hi),
        ));
    }
    let m = grid.len();
    let n = basis.len();
    let interior = grid.interior();

    let mut rhs = DVector::zeros(m);
    for (j, &x) in interior.iter().enumerate() {
        let f = bvp.forcing(x);
        if !f.is_finite() {
            return Err(ElmError::NonFinite {
                what: "forcing",
                x,
                value: f,
            });
        }
        rhs[j] = f;
    }
    rhs[m - 2] = bvp.left.g;
    rhs[m - 1] = bvp.right.g;

    let boundary = |bc: &RobinBc, (s, d1, _): (f64, f64, f64)| bc.nu * d1 + bc.rho * s;

    // column-major storage: each column holds one neuron at every row
    let mut matrix = DMatrix::zeros(m, n);
    par::for_each_chunk_mut(exec, matrix.as_mut_slice(), m, |i, col| {
        for (j, &x) in interior.iter().enumerate() {
            let (s, d1, d2) = basis.jet(i, x);
            col[j] = bvp.apply(s, d1, d2);
        }
        col[m - 2] = boundary(&bvp.left, basis.jet(i, 0.0));
        col[m - 1] = boundary(&bvp.right, basis.jet(i, 1.0));
    });

    let mut row_kind = vec![RowKind::Interior; m - 2];
    row_kind.push(RowKind::BoundaryLeft);
    row_kind.push(RowKind::BoundaryRight);

    Ok(CollocationSystem {
        matrix,
        rhs,
        row_kind,
        grid: grid.clone(),
    })
}
