//! Nodal scalar fields and norms.

use std::sync::Arc;

use crate::error::{LesError, Result};
use crate::fields::grid::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    L2,
    LInf,
}

/// One time level of nodal values on a shared grid.
#[derive(Debug, Clone)]
pub struct ScalarField<const D: usize> {
    grid: Arc<Grid<D>>,
    values: Vec<f64>,
}

pub type ScalarField1 = ScalarField<1>;
pub type ScalarField3 = ScalarField<3>;

impl<const D: usize> ScalarField<D> {
    pub fn zeros(grid: Arc<Grid<D>>) -> Self {
        let n = grid.n_total();
        Self { grid, values: vec![0.0; n] }
    }

    pub fn from_fn(grid: Arc<Grid<D>>, f: impl Fn(&[f64; D]) -> f64) -> Self {
        let n = grid.n_total();
        let mut values = Vec::with_capacity(n);
        for flat in 0..n {
            let x = grid.coord(grid.unflatten(flat));
            values.push(f(&x));
        }
        Self { grid, values }
    }

    pub fn from_values(grid: Arc<Grid<D>>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_total() {
            return Err(LesError::GridMismatch(format!(
                "value count {} does not match grid size {}",
                values.len(),
                grid.n_total()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Arc<Grid<D>> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if !self.same_grid(other) {
            return Err(LesError::GridMismatch("zip_map on different grids".into()));
        }
        Ok(Self {
            grid: Arc::clone(&self.grid),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, &v| m.max(v.abs()))
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// Trapezoid weight for node `i` of `n` along one axis: dx/2 at the ends, dx inside.
fn axis_weight(i: usize, n: usize, dx: f64) -> f64 {
    if i == 0 || i == n - 1 {
        0.5 * dx
    } else {
        dx
    }
}

/// `L2` is the trapezoid-weighted root integral of f², so a unit constant on a
/// unit domain has norm exactly 1. `LInf` is the max absolute nodal value.
pub fn norm<const D: usize>(f: &ScalarField<D>, which: NormKind) -> f64 {
    match which {
        NormKind::LInf => f.max_abs(),
        NormKind::L2 => {
            let grid = f.grid();
            let mut acc = 0.0;
            for (flat, &v) in f.values().iter().enumerate() {
                let idx = grid.unflatten(flat);
                let mut w = 1.0;
                for a in 0..D {
                    w *= axis_weight(idx[a], grid.n()[a], grid.dx(a));
                }
                acc += w * v * v;
            }
            acc.sqrt()
        }
    }
}

pub fn error_norm<const D: usize>(
    a: &ScalarField<D>,
    b: &ScalarField<D>,
    which: NormKind,
) -> Result<f64> {
    let diff = a.zip_map(b, |x, y| x - y)?;
    Ok(norm(&diff, which))
}

/// Total variation Σ|u_{i+1} − u_i|; an oscillation indicator for 1D states.
pub fn total_variation(f: &ScalarField<1>) -> f64 {
    f.values().windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::grid::Grid;

    fn unit_grid(n: usize) -> Arc<Grid<1>> {
        Arc::new(Grid::line(0.0, 1.0, n, 0.01).unwrap())
    }

    #[test]
    fn error_norm_of_identical_fields_is_zero() {
        let g = unit_grid(11);
        let f = ScalarField::from_fn(Arc::clone(&g), |x| x[0].sin());
        assert_eq!(error_norm(&f, &f, NormKind::L2).unwrap(), 0.0);
        assert_eq!(error_norm(&f, &f, NormKind::LInf).unwrap(), 0.0);
    }

    #[test]
    fn unit_constant_has_unit_l2_norm() {
        let g = unit_grid(11);
        let a = ScalarField::zeros(Arc::clone(&g));
        let b = ScalarField::from_fn(Arc::clone(&g), |_| 1.0);
        let e = error_norm(&a, &b, NormKind::L2).unwrap();
        assert!((e - 1.0).abs() < 1e-14, "got {e}");
    }

    #[test]
    fn sine_l2_norm_matches_analytic_integral() {
        let g = unit_grid(1001);
        let a = ScalarField::zeros(Arc::clone(&g));
        let b = ScalarField::from_fn(Arc::clone(&g), |x| (2.0 * std::f64::consts::PI * x[0]).sin());
        let e = error_norm(&a, &b, NormKind::L2).unwrap();
        assert!((e - 0.5f64.sqrt()).abs() < 1e-3, "got {e}");
    }

    #[test]
    fn grid_mismatch_is_an_error() {
        let a = ScalarField::zeros(unit_grid(11));
        let b = ScalarField::zeros(unit_grid(21));
        assert!(error_norm(&a, &b, NormKind::L2).is_err());
    }

    #[test]
    fn total_variation_of_sawtooth() {
        let g = unit_grid(5);
        let f = ScalarField::from_values(g, vec![0.0, 1.0, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(total_variation(&f), 4.0);
    }
}
