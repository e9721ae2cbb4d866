//! 1D closure terms of the filtered Burgers model.
//!
//! With ū the resolved (filtered) velocity and w = ∂ū/∂x:
//!
//! ```text
//! τ  = η² [ (ū_t)²/γ_T + w²/γ_L ]
//! K₄ = (1 + λ²w²)^{1/2}
//! K₅ = (1 + λ²w²)^{-3/2} (3 + 2λ²w²) [ (ū_tx)²/γ_T + (ū_xx)²/γ_L ]
//! S  = ν [ K₄ + λ² K₅ η² ] w
//! ```
//!
//! τ is half the subgrid residual of ū², S the filtered nonlinear flux.

use std::sync::Arc;

use crate::error::Result;
use crate::fields::{
    central_derivative, time_derivative, BoundaryMode, DerivOrder, FieldHistory1, ScalarField1,
    TimeDerivOrder,
};
use crate::filter::{FilterSpec, SmoothField};

use super::ModelParams;

/// Point values of the resolved-velocity derivatives entering the closures.
#[derive(Debug, Clone, Copy, Default)]
pub struct VelocityJet1 {
    pub u_t: f64,
    pub u_x: f64,
    pub u_xx: f64,
    pub u_tx: f64,
}

/// Closure terms at one point.
#[derive(Debug, Clone, Copy)]
pub struct ClosurePoint1 {
    pub tau: f64,
    pub s: f64,
    pub k4: f64,
    pub k5: f64,
}

/// Closure-term fields over a grid.
#[derive(Debug, Clone)]
pub struct ClosureTerms1D {
    pub tau: ScalarField1,
    pub s: ScalarField1,
    pub k4: ScalarField1,
    pub k5: ScalarField1,
}

/// Shared formula kernel for both the grid and the closed-form paths.
pub fn closure_terms_1d(jet: &VelocityJet1, p: &ModelParams, spec: &FilterSpec) -> ClosurePoint1 {
    let eta2 = spec.eta * spec.eta;
    let l2 = p.lambda * p.lambda;
    let w2 = jet.u_x * jet.u_x;
    let base = 1.0 + l2 * w2;
    let tau = eta2 * (jet.u_t * jet.u_t / spec.gamma_t + w2 / spec.gamma_l);
    let k4 = base.sqrt();
    let curvature = jet.u_tx * jet.u_tx / spec.gamma_t + jet.u_xx * jet.u_xx / spec.gamma_l;
    let k5 = base.powf(-1.5) * (3.0 + 2.0 * l2 * w2) * curvature;
    let s = p.nu * (k4 + l2 * k5 * eta2) * jet.u_x;
    ClosurePoint1 { tau, s, k4, k5 }
}

/// Grid-path evaluation: spatial derivatives by second-order stencils, the
/// time derivative by a backward difference on the newest two history levels.
pub fn closure_1d(
    history: &FieldHistory1,
    p: &ModelParams,
    spec: &FilterSpec,
    bc: BoundaryMode,
) -> Result<ClosureTerms1D> {
    p.require_half_exponent()?;
    if spec.spatial_dim != 1 {
        return Err(crate::error::LesError::InvalidParameter(
            "1D closures need a 1D filter spec".into(),
        ));
    }
    let (_, u) = history.newest().ok_or(crate::error::LesError::InsufficientHistory {
        needed: 2,
        have: 0,
    })?;
    let u_t = time_derivative(history, TimeDerivOrder::First)?;
    let u_x = central_derivative(u, 0, DerivOrder::First, bc)?;
    let u_xx = central_derivative(u, 0, DerivOrder::Second, bc)?;
    let u_tx = central_derivative(&u_t, 0, DerivOrder::First, bc)?;

    let grid = Arc::clone(u.grid());
    let n = grid.n_total();
    let mut tau = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    for i in 0..n {
        let jet = VelocityJet1 {
            u_t: u_t.values()[i],
            u_x: u_x.values()[i],
            u_xx: u_xx.values()[i],
            u_tx: u_tx.values()[i],
        };
        let pt = closure_terms_1d(&jet, p, spec);
        tau[i] = pt.tau;
        s[i] = pt.s;
        k4[i] = pt.k4;
        k5[i] = pt.k5;
    }
    Ok(ClosureTerms1D {
        tau: ScalarField1::from_values(Arc::clone(&grid), tau)?,
        s: ScalarField1::from_values(Arc::clone(&grid), s)?,
        k4: ScalarField1::from_values(Arc::clone(&grid), k4)?,
        k5: ScalarField1::from_values(grid, k5)?,
    })
}

/// Closed-form path: exact partials of a smooth resolved field, so oracle
/// comparisons carry no stencil error.
pub fn closure_1d_closed_form(
    ubar: &dyn SmoothField,
    p: &ModelParams,
    spec: &FilterSpec,
    t: f64,
    x: f64,
) -> Result<ClosurePoint1> {
    p.require_half_exponent()?;
    let jet = VelocityJet1 {
        u_t: ubar.partial(1, &[0], t, &[x]),
        u_x: ubar.partial(0, &[1], t, &[x]),
        u_xx: ubar.partial(0, &[2], t, &[x]),
        u_tx: ubar.partial(1, &[1], t, &[x]),
    };
    Ok(closure_terms_1d(&jet, p, spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{Grid, ScalarField};
    use crate::filter::{FilterOracle, FnField, ModeSum, TaylorFiltered};
    use std::f64::consts::PI;

    fn spec() -> FilterSpec {
        FilterSpec::one_d(0.1, 6.0, 6.0).unwrap()
    }

    fn steady_history(n: usize, f: impl Fn(f64) -> f64) -> FieldHistory1 {
        let g = Arc::new(Grid::line(0.0, 1.0, n, 0.01).unwrap());
        let u = ScalarField::from_fn(g, |x| f(x[0]));
        FieldHistory1::seeded(u, 0.0, 3).unwrap()
    }

    #[test]
    fn steady_affine_field_has_exact_closure_values() {
        let a = 1.7;
        let lambda = 2.0;
        let p = ModelParams::new(0.3, lambda, 0.5, 1.0).unwrap();
        let spec = spec();
        let h = steady_history(11, |x| a * x);
        let terms = closure_1d(&h, &p, &spec, BoundaryMode::OneSided).unwrap();
        let tau_exact = spec.eta * spec.eta * a * a / spec.gamma_l;
        let k4_exact = (1.0 + lambda * lambda * a * a).sqrt();
        let s_exact = p.nu * k4_exact * a;
        for i in 0..11 {
            assert!((terms.tau.values()[i] - tau_exact).abs() < 1e-13);
            assert!((terms.k4.values()[i] - k4_exact).abs() < 1e-12);
            assert!(terms.k5.values()[i].abs() < 1e-10);
            assert!((terms.s.values()[i] - s_exact).abs() < 1e-12);
        }
    }

    #[test]
    fn lambda_zero_reduces_to_newtonian_flux() {
        let p = ModelParams::new(0.5, 0.0, 0.5, 1.0).unwrap();
        let spec = spec();
        let h = steady_history(21, |x| (2.0 * PI * x).sin());
        let terms = closure_1d(&h, &p, &spec, BoundaryMode::Periodic).unwrap();
        let (_, u) = h.newest().unwrap();
        let u_x = central_derivative(u, 0, DerivOrder::First, BoundaryMode::Periodic).unwrap();
        for i in 0..21 {
            assert_eq!(terms.k4.values()[i], 1.0);
            assert_eq!(terms.s.values()[i], p.nu * u_x.values()[i]);
        }
    }

    #[test]
    fn rejects_wrong_exponent() {
        let p = ModelParams::new(0.5, 1.0, 1.0, 1.0).unwrap();
        let h = steady_history(11, |x| x);
        assert!(closure_1d(&h, &p, &spec(), BoundaryMode::OneSided).is_err());
    }

    #[test]
    fn closure_invariants_on_oscillatory_field() {
        let p = ModelParams::new(0.5, 1.5, 0.5, 1.0).unwrap();
        let spec = spec();
        let h = steady_history(41, |x| (2.0 * PI * x).sin() + 0.3 * (6.0 * PI * x).cos());
        let terms = closure_1d(&h, &p, &spec, BoundaryMode::Periodic).unwrap();
        for i in 0..41 {
            assert!(terms.tau.values()[i] >= 0.0);
            assert!(terms.k4.values()[i] >= 1.0);
            assert!(terms.k5.values()[i] >= 0.0);
        }
    }

    /// The flux S from the closure formula converges at O(η⁴) to the true
    /// filtered flux ⟨(1+λ²u_x²)^{1/2} u_x⟩ on a closed-form field.
    #[test]
    fn flux_matches_bruteforce_filter_at_fourth_order() {
        use crate::fields::fit_loglog_slope;
        let lambda = 1.0;
        let p = ModelParams::new(1.0, lambda, 0.5, 1.0).unwrap();
        let u = ModeSum::sin_x(1.0, 2.0 * PI, 0.0);
        let integrand = FnField::new(1, move |s, y: &[f64]| {
            let w = 2.0 * PI * (2.0 * PI * y[0]).cos();
            let _ = s;
            (1.0 + lambda * lambda * w * w).sqrt() * w
        });
        let mut pairs = Vec::new();
        for k in 0..4 {
            let eta = 0.1 / 2f64.powi(k);
            let spec = FilterSpec::one_d(eta, 6.0, 6.0).unwrap();
            let oracle = FilterOracle::new(spec.clone(), 32);
            let ubar = TaylorFiltered::new(&u, &spec);
            let mut worst: f64 = 0.0;
            for x in [0.0, 0.17, 0.42] {
                let s_formula = closure_1d_closed_form(&ubar, &p, &spec, 0.0, x).unwrap().s;
                let s_brute = p.nu * oracle.filter(&integrand, 0.0, &[x]).unwrap();
                worst = worst.max((s_formula - s_brute).abs());
            }
            pairs.push((eta, worst));
        }
        let slope = fit_loglog_slope(&pairs);
        assert!(slope >= 3.5, "slope {slope}, pairs {pairs:?}");
    }
}
