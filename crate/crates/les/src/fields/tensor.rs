//! Symmetric 3×3 tensor fields (triangular storage).

use std::sync::Arc;

use crate::error::{LesError, Result};
use crate::fields::grid::Grid3;
use crate::fields::scalar::ScalarField3;
use crate::fields::stencil::{central_derivative, BoundaryMode, DerivOrder};

/// Index of component (i, j) in triangular order xx, xy, xz, yy, yz, zz.
pub const SYM_PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

pub fn sym_index(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    match (a, b) {
        (0, 0) => 0,
        (0, 1) => 1,
        (0, 2) => 2,
        (1, 1) => 3,
        (1, 2) => 4,
        (2, 2) => 5,
        _ => unreachable!("tensor index out of range"),
    }
}

/// Symmetric tensor value at one node.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SymTensor3(pub [f64; 6]);

impl SymTensor3 {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[sym_index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.0[sym_index(i, j)] = v;
    }

    pub fn trace(&self) -> f64 {
        self.0[0] + self.0[3] + self.0[5]
    }

    /// Σ_{i,j} T_ij² over all nine index pairs (off-diagonals count twice).
    pub fn frobenius_sq(&self) -> f64 {
        let d = self.0[0] * self.0[0] + self.0[3] * self.0[3] + self.0[5] * self.0[5];
        let o = self.0[1] * self.0[1] + self.0[2] * self.0[2] + self.0[4] * self.0[4];
        d + 2.0 * o
    }

    pub fn frobenius(&self) -> f64 {
        self.frobenius_sq().sqrt()
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = *self;
        for v in &mut out.0 {
            *v *= c;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = *self;
        for (v, w) in out.0.iter_mut().zip(other.0) {
            *v += w;
        }
        out
    }
}

/// Symmetric 3×3 tensor per node; component (i,j) equals (j,i) by storage.
#[derive(Debug, Clone)]
pub struct TensorField3 {
    grid: Arc<Grid3>,
    comps: [Vec<f64>; 6],
}

impl TensorField3 {
    pub fn zeros(grid: Arc<Grid3>) -> Self {
        let n = grid.n_total();
        Self {
            grid,
            comps: std::array::from_fn(|_| vec![0.0; n]),
        }
    }

    pub fn grid(&self) -> &Arc<Grid3> {
        &self.grid
    }

    pub fn component(&self, i: usize, j: usize) -> &[f64] {
        &self.comps[sym_index(i, j)]
    }

    pub fn component_mut(&mut self, i: usize, j: usize) -> &mut [f64] {
        &mut self.comps[sym_index(i, j)]
    }

    pub fn at(&self, node: usize) -> SymTensor3 {
        SymTensor3(std::array::from_fn(|c| self.comps[c][node]))
    }

    pub fn set_at(&mut self, node: usize, t: SymTensor3) {
        for c in 0..6 {
            self.comps[c][node] = t.0[c];
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.grid.n_total()
    }
}

/// Strain rate D = ½(∇u + ∇uᵀ) of a velocity field, via central differences.
pub fn strain_rate(u: &[ScalarField3; 3], bc: BoundaryMode) -> Result<TensorField3> {
    for c in 1..3 {
        if !u[0].same_grid(&u[c]) {
            return Err(LesError::GridMismatch(
                "velocity components on different grids".into(),
            ));
        }
    }
    let grid = Arc::clone(u[0].grid());
    // grad[i][j] = ∂u_i/∂x_j
    let mut grad: Vec<Vec<ScalarField3>> = Vec::with_capacity(3);
    for comp in u {
        let mut row = Vec::with_capacity(3);
        for axis in 0..3 {
            row.push(central_derivative(comp, axis, DerivOrder::First, bc)?);
        }
        grad.push(row);
    }
    let mut out = TensorField3::zeros(grid);
    for (i, j) in SYM_PAIRS {
        let gij = grad[i][j].values();
        let gji = grad[j][i].values();
        let c = out.component_mut(i, j);
        for (k, v) in c.iter_mut().enumerate() {
            *v = 0.5 * (gij[k] + gji[k]);
        }
    }
    Ok(out)
}
