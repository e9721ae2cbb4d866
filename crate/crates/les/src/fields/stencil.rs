//! Second-order finite-difference stencils.
//!
//! Interior nodes use the classical central differences
//!
//! ```text
//! f'_i  = (f_{i+1} - f_{i-1}) / (2 dx)
//! f''_i = (f_{i+1} - 2 f_i + f_{i-1}) / dx²
//! ```
//!
//! Boundary treatment keeps the global second order: `Periodic` wraps indices
//! (the last node duplicates the first), `OneSided` switches to the
//! second-order one-sided formulas instead of dropping the order.

use std::sync::Arc;

use crate::error::{LesError, Result};
use crate::fields::scalar::ScalarField;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryMode {
    /// The last node along the axis is the same physical point as the first.
    Periodic,
    /// One-sided second-order stencils at both ends.
    OneSided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivOrder {
    First,
    Second,
}

/// Derivative of one grid line along an axis, written into `out`.
///
/// `line` holds the nodal values, `out` must have the same length.
fn derive_line(line: &[f64], out: &mut [f64], dx: f64, order: DerivOrder, bc: BoundaryMode) {
    let n = line.len();
    match bc {
        BoundaryMode::Periodic => {
            // Unique nodes 0..m; node n-1 mirrors node 0.
            let m = n - 1;
            let at = |i: isize| -> f64 { line[(i.rem_euclid(m as isize)) as usize] };
            for j in 0..m {
                let j = j as isize;
                out[j as usize] = match order {
                    DerivOrder::First => (at(j + 1) - at(j - 1)) / (2.0 * dx),
                    DerivOrder::Second => (at(j + 1) - 2.0 * at(j) + at(j - 1)) / (dx * dx),
                };
            }
            out[n - 1] = out[0];
        }
        BoundaryMode::OneSided => {
            for j in 1..n - 1 {
                out[j] = match order {
                    DerivOrder::First => (line[j + 1] - line[j - 1]) / (2.0 * dx),
                    DerivOrder::Second => {
                        (line[j + 1] - 2.0 * line[j] + line[j - 1]) / (dx * dx)
                    }
                };
            }
            match order {
                DerivOrder::First => {
                    out[0] = (-3.0 * line[0] + 4.0 * line[1] - line[2]) / (2.0 * dx);
                    out[n - 1] = (3.0 * line[n - 1] - 4.0 * line[n - 2] + line[n - 3]) / (2.0 * dx);
                }
                DerivOrder::Second => {
                    if n >= 4 {
                        out[0] =
                            (2.0 * line[0] - 5.0 * line[1] + 4.0 * line[2] - line[3]) / (dx * dx);
                        out[n - 1] = (2.0 * line[n - 1] - 5.0 * line[n - 2] + 4.0 * line[n - 3]
                            - line[n - 4])
                            / (dx * dx);
                    } else {
                        // 3-point fallback, still exact on quadratics.
                        out[0] = (line[0] - 2.0 * line[1] + line[2]) / (dx * dx);
                        out[n - 1] = (line[n - 1] - 2.0 * line[n - 2] + line[n - 3]) / (dx * dx);
                    }
                }
            }
        }
    }
}

/// Second-order spatial derivative of `f` along `axis`.
pub fn central_derivative<const D: usize>(
    f: &ScalarField<D>,
    axis: usize,
    order: DerivOrder,
    bc: BoundaryMode,
) -> Result<ScalarField<D>> {
    if axis >= D {
        return Err(LesError::AxisOutOfRange { axis, dim: D });
    }
    let grid = Arc::clone(f.grid());
    let n_axis = grid.n()[axis];
    if n_axis < 3 {
        return Err(LesError::InvalidParameter(format!(
            "axis {axis} needs at least 3 points for a stencil"
        )));
    }
    let stride = grid.stride(axis);
    let dx = grid.dx(axis);
    let n_total = grid.n_total();
    let n_lines = n_total / n_axis;

    let mut out = vec![0.0; n_total];
    let mut line = vec![0.0; n_axis];
    let mut dline = vec![0.0; n_axis];
    for l in 0..n_lines {
        // Base flat index of this line: enumerate all nodes with axis index 0.
        let block = stride * n_axis;
        let base = (l / stride) * block + (l % stride);
        for j in 0..n_axis {
            line[j] = f.values()[base + j * stride];
        }
        derive_line(&line, &mut dline, dx, order, bc);
        for j in 0..n_axis {
            out[base + j * stride] = dline[j];
        }
    }
    ScalarField::from_values(grid, out)
}

/// Least-squares slope of ln(y) against ln(x); the observed convergence order.
pub fn fit_loglog_slope(pairs: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = pairs
        .iter()
        .filter(|(h, e)| *h > 0.0 && *e > 0.0)
        .map(|(h, e)| (h.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}
