//! Reference finite-difference solver with 7-point stencils.
//!
//! Each interior node uses the 7 grid nodes nearest to it: centered away from
//! the boundary, shifted one-sided next to it. The weights are exact for
//! polynomials of degree 6, giving sixth-order derivatives everywhere.

use nalgebra::{DMatrix, DVector};

use crate::assembly::CollocationGrid;
use crate::error::{invalid, ElmError, Result};
use crate::problem::LinearBvp;

pub const STENCIL_LEN: usize = 7;

/// Finite-difference weights on arbitrary nodes (Fornberg's recurrence).
///
/// Returns `w` with `Σ w_k f(nodes[k]) ≈ f^{(order)}(x0)`, exact for every
/// polynomial of degree below `nodes.len()`.
pub fn fd_weights(nodes: &[f64], x0: f64, order: usize) -> Result<Vec<f64>> {
    let n = nodes.len();
    if n == 0 || order >= n {
        return Err(invalid(
            "order",
            format!("derivative order {order} needs more than {n} nodes"),
        ));
    }
    if nodes.iter().any(|v| !v.is_finite()) || !x0.is_finite() {
        return Err(invalid(
            "nodes",
            "nodes and evaluation point must be finite",
        ));
    }
    for i in 0..n {
        for j in 0..i {
            if nodes[i] == nodes[j] {
                return Err(invalid("nodes", format!("duplicate node {}", nodes[i])));
            }
        }
    }

    // c[j][k]: weight of node j for derivative k
    let mut c = vec![vec![0.0; order + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    Ok(c.into_iter().map(|row| row[order]).collect())
}

/// First- and second-derivative weights on one 7-node stencil.
#[derive(Debug, Clone, PartialEq)]
pub struct StencilWeights {
    /// Index of the first stencil node on the grid.
    pub start: usize,
    pub nodes: [f64; STENCIL_LEN],
    pub center: f64,
    pub d1: [f64; STENCIL_LEN],
    pub d2: [f64; STENCIL_LEN],
}

impl StencilWeights {
    /// Stencil for grid node `j`: the 7 nearest nodes, clamped to the grid.
    pub fn for_node(grid: &CollocationGrid, j: usize) -> Result<Self> {
        let m = grid.len();
        if m < STENCIL_LEN || j >= m {
            return Err(invalid("M", format!("node {j} on a grid of {m} points")));
        }
        let start = j.saturating_sub(STENCIL_LEN / 2).min(m - STENCIL_LEN);
        let mut nodes = [0.0; STENCIL_LEN];
        nodes.copy_from_slice(&grid.points()[start..start + STENCIL_LEN]);
        let center = grid.points()[j];
        let d1 = fd_weights(&nodes, center, 1)?;
        let d2 = fd_weights(&nodes, center, 2)?;
        Ok(StencilWeights {
            start,
            nodes,
            center,
            d1: d1.try_into().unwrap(),
            d2: d2.try_into().unwrap(),
        })
    }
}

/// Nodal FD values with their piecewise-linear interpolant.
#[derive(Debug, Clone)]
pub struct FdSolution {
    pub grid: CollocationGrid,
    pub values: Vec<f64>,
}

impl FdSolution {
    /// Piecewise-linear interpolation of the nodal values; clamps outside `[0, 1]`.
    pub fn value(&self, x: f64) -> f64 {
        let pts = self.grid.points();
        let m = pts.len();
        if x <= 0.0 {
            return self.values[0];
        }
        if x >= 1.0 {
            return self.values[m - 1];
        }
        let k = ((x / self.grid.spacing()) as usize).min(m - 2);
        // guard against rounding at cell edges
        let k = if x < pts[k] {
            k - 1
        } else if x > pts[k + 1] {
            k + 1
        } else {
            k
        };
        let t = (x - pts[k]) / (pts[k + 1] - pts[k]);
        if t == 0.0 {
            return self.values[k];
        }
        if t == 1.0 {
            return self.values[k + 1];
        }
        (1.0 - t) * self.values[k] + t * self.values[k + 1]
    }
}

/// Solves a Dirichlet problem with 7-point finite differences on `m` equispaced nodes.
pub fn solve_fd(bvp: &LinearBvp, m: usize) -> Result<FdSolution> {
    if m < 8 {
        return Err(invalid("M", format!("{m} < 8 points for 7-node stencils")));
    }
    if !bvp.is_dirichlet() {
        return Err(ElmError::Unsupported(
            "finite-difference reference handles Dirichlet conditions only".into(),
        ));
    }
    let grid = CollocationGrid::uniform(m)?;
    let mut a = DMatrix::zeros(m, m);
    let mut b = DVector::zeros(m);

    a[(0, 0)] = 1.0;
    b[0] = bvp.left.g / bvp.left.rho;
    a[(m - 1, m - 1)] = 1.0;
    b[m - 1] = bvp.right.g / bvp.right.rho;

    for j in 1..m - 1 {
        let st = StencilWeights::for_node(&grid, j)?;
        for k in 0..STENCIL_LEN {
            a[(j, st.start + k)] += -bvp.mu * st.d2[k] + bvp.gamma * st.d1[k];
        }
        a[(j, j)] += bvp.lambda;
        let x = grid.points()[j];
        let f = bvp.forcing(x);
        if !f.is_finite() {
            return Err(ElmError::NonFinite {
                what: "forcing",
                x,
                value: f,
            });
        }
        b[j] = f;
    }

    let singular = |a: &DMatrix<f64>| {
        let sv = a.singular_values();
        let max = sv.max();
        let min = sv.min();
        ElmError::SingularSystem {
            condition: if min > 0.0 { max / min } else { f64::INFINITY },
        }
    };
    let values = match a.clone().lu().solve(&b) {
        Some(v) if v.iter().all(|x| x.is_finite()) => v,
        _ => return Err(singular(&a)),
    };
    Ok(FdSolution {
        grid,
        values: values.iter().copied().collect(),
    })
}
