//! Ring buffer of recent time levels, for backward time derivatives.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::error::{LesError, Result};
use crate::fields::scalar::ScalarField;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeDerivOrder {
    First,
    Second,
}

/// The last `capacity` time levels of a scalar field, newest last.
///
/// Stamps must be strictly increasing and uniformly spaced by the grid dt.
#[derive(Debug, Clone)]
pub struct FieldHistory<const D: usize> {
    levels: VecDeque<(f64, ScalarField<D>)>,
    capacity: usize,
}

pub type FieldHistory1 = FieldHistory<1>;
pub type FieldHistory3 = FieldHistory<3>;

impl<const D: usize> FieldHistory<D> {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity < 2 {
            return Err(LesError::InvalidParameter(
                "history must retain at least 2 time levels".into(),
            ));
        }
        Ok(Self {
            levels: VecDeque::with_capacity(capacity + 1),
            capacity,
        })
    }

    /// Seed with one level duplicated at `t - dt` and `t`, so the first
    /// backward time derivative is exactly zero.
    pub fn seeded(field: ScalarField<D>, t: f64, capacity: usize) -> Result<Self> {
        let dt = field.grid().dt();
        let mut h = Self::new(capacity)?;
        h.push(t - dt, field.clone())?;
        h.push(t, field)?;
        Ok(h)
    }

    pub fn push(&mut self, t: f64, field: ScalarField<D>) -> Result<()> {
        if let Some((t_last, last)) = self.levels.back() {
            let dt = field.grid().dt();
            if t <= *t_last {
                return Err(LesError::InvalidParameter(format!(
                    "time stamps must strictly increase: {t} after {t_last}"
                )));
            }
            if ((t - t_last) - dt).abs() > 1e-9 * dt.max(1.0) {
                return Err(LesError::InvalidParameter(format!(
                    "non-uniform history spacing: {} vs dt {}",
                    t - t_last,
                    dt
                )));
            }
            if !last.same_grid(&field) {
                return Err(LesError::GridMismatch("history level on a new grid".into()));
            }
        }
        self.levels.push_back((t, field));
        while self.levels.len() > self.capacity {
            self.levels.pop_front();
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// k = 0 is the newest level, k = 1 the one before, ...
    pub fn level(&self, k: usize) -> Option<&(f64, ScalarField<D>)> {
        self.levels.get(self.levels.len().checked_sub(k + 1)?)
    }

    pub fn newest(&self) -> Option<&(f64, ScalarField<D>)> {
        self.levels.back()
    }
}

/// Backward-difference time derivative at the newest level.
///
/// First order uses two levels, second order the three-level formula
/// (3uⁿ − 4uⁿ⁻¹ + uⁿ⁻²)/(2 dt).
pub fn time_derivative<const D: usize>(
    h: &FieldHistory<D>,
    order: TimeDerivOrder,
) -> Result<ScalarField<D>> {
    let needed = match order {
        TimeDerivOrder::First => 2,
        TimeDerivOrder::Second => 3,
    };
    if h.len() < needed {
        return Err(LesError::InsufficientHistory {
            needed,
            have: h.len(),
        });
    }
    let (_, u0) = h.level(0).unwrap();
    let (_, u1) = h.level(1).unwrap();
    let dt = u0.grid().dt();
    let grid = Arc::clone(u0.grid());
    let values = match order {
        TimeDerivOrder::First => u0
            .values()
            .iter()
            .zip(u1.values())
            .map(|(&a, &b)| (a - b) / dt)
            .collect(),
        TimeDerivOrder::Second => {
            let (_, u2) = h.level(2).unwrap();
            u0.values()
                .iter()
                .zip(u1.values())
                .zip(u2.values())
                .map(|((&a, &b), &c)| (3.0 * a - 4.0 * b + c) / (2.0 * dt))
                .collect()
        }
    };
    ScalarField::from_values(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::grid::Grid;

    fn grid() -> Arc<Grid<1>> {
        Arc::new(Grid::line(0.0, 1.0, 5, 0.1).unwrap())
    }

    fn push_levels(values: &[f64]) -> FieldHistory<1> {
        let g = grid();
        let mut h = FieldHistory::new(3).unwrap();
        for (k, &v) in values.iter().enumerate() {
            h.push(k as f64 * 0.1, ScalarField::from_fn(Arc::clone(&g), |_| v))
                .unwrap();
        }
        h
    }

    #[test]
    fn constant_levels_have_zero_derivative() {
        let h = push_levels(&[2.0, 2.0, 2.0]);
        for order in [TimeDerivOrder::First, TimeDerivOrder::Second] {
            let d = time_derivative(&h, order).unwrap();
            assert_eq!(d.max_abs(), 0.0);
        }
    }

    #[test]
    fn affine_in_time_is_exact_at_first_order() {
        let a = 3.0;
        let h = push_levels(&[0.0, a * 0.1]);
        let d = time_derivative(&h, TimeDerivOrder::First).unwrap();
        for &v in d.values() {
            assert!((v - a).abs() < 1e-12);
        }
    }

    #[test]
    fn quadratic_in_time_is_exact_at_second_order() {
        // u(t) = t² sampled at t = 0.1, 0.2, 0.3; exact derivative 2 t₀ = 0.6.
        let h = push_levels(&[0.01, 0.04, 0.09]);
        let d = time_derivative(&h, TimeDerivOrder::Second).unwrap();
        for &v in d.values() {
            assert!((v - 0.6).abs() < 1e-12, "got {v}");
        }
    }

    #[test]
    fn insufficient_history_is_an_error() {
        let h = push_levels(&[1.0, 2.0]);
        assert!(matches!(
            time_derivative(&h, TimeDerivOrder::Second),
            Err(LesError::InsufficientHistory { .. })
        ));
    }

    #[test]
    fn ring_drops_oldest_level() {
        let h = push_levels(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(h.len(), 3);
        assert_eq!(h.level(2).unwrap().1.values()[0], 2.0);
    }

    #[test]
    fn rejects_non_monotone_stamps() {
        let g = grid();
        let mut h = FieldHistory::new(3).unwrap();
        h.push(0.1, ScalarField::zeros(Arc::clone(&g))).unwrap();
        assert!(h.push(0.05, ScalarField::zeros(g)).is_err());
    }
}
