//! Uniform space-time grids.

use crate::error::{LesError, Result};

/// Uniform grid over `D` spatial axes plus a time step.
///
/// Node `i` on axis `a` sits at `origin[a] + i * dx[a]`, with
/// `dx[a] = extent[a] / (n[a] - 1)` so both endpoints are nodes.
/// Values are stored row-major by axis order (last axis contiguous).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<const D: usize> {
    origin: [f64; D],
    extent: [f64; D],
    n: [usize; D],
    dx: [f64; D],
    dt: f64,
}

pub type Grid1 = Grid<1>;
pub type Grid3 = Grid<3>;

impl<const D: usize> Grid<D> {
    pub fn new(origin: [f64; D], extent: [f64; D], n: [usize; D], dt: f64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(LesError::InvalidParameter(format!("dt must be > 0, got {dt}")));
        }
        let mut dx = [0.0; D];
        for a in 0..D {
            if n[a] < 3 {
                return Err(LesError::InvalidParameter(format!(
                    "axis {a} needs at least 3 points, got {}",
                    n[a]
                )));
            }
            if !(extent[a] > 0.0) || !extent[a].is_finite() || !origin[a].is_finite() {
                return Err(LesError::InvalidParameter(format!(
                    "axis {a}: degenerate extent {} or origin {}",
                    extent[a], origin[a]
                )));
            }
            dx[a] = extent[a] / (n[a] - 1) as f64;
        }
        Ok(Self { origin, extent, n, dx, dt })
    }

    pub fn origin(&self) -> &[f64; D] {
        &self.origin
    }

    pub fn extent(&self) -> &[f64; D] {
        &self.extent
    }

    pub fn n(&self) -> &[usize; D] {
        &self.n
    }

    pub fn dx(&self, axis: usize) -> f64 {
        self.dx[axis]
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_total(&self) -> usize {
        self.n.iter().product()
    }

    /// Row-major stride of `axis`.
    pub fn stride(&self, axis: usize) -> usize {
        self.n[axis + 1..].iter().product()
    }

    /// Physical coordinates of a multi-index.
    pub fn coord(&self, idx: [usize; D]) -> [f64; D] {
        let mut x = [0.0; D];
        for a in 0..D {
            x[a] = self.origin[a] + idx[a] as f64 * self.dx[a];
        }
        x
    }

    /// Decompose a flat index into the per-axis multi-index.
    pub fn unflatten(&self, mut flat: usize) -> [usize; D] {
        let mut idx = [0usize; D];
        for a in (0..D).rev() {
            idx[a] = flat % self.n[a];
            flat /= self.n[a];
        }
        idx
    }

    pub fn flatten(&self, idx: [usize; D]) -> usize {
        let mut flat = 0;
        for a in 0..D {
            flat = flat * self.n[a] + idx[a];
        }
        flat
    }
}

impl Grid<1> {
    /// 1D convenience constructor over `[x0, x1]` with `n` nodes.
    pub fn line(x0: f64, x1: f64, n: usize, dt: f64) -> Result<Self> {
        Grid::new([x0], [x1 - x0], [n], dt)
    }
}

impl Grid<3> {
    /// Cube `[x0, x0+l]^3` with `n` nodes per axis.
    pub fn cube(x0: f64, l: f64, n: usize, dt: f64) -> Result<Self> {
        Grid::new([x0; 3], [l; 3], [n; 3], dt)
    }
}
