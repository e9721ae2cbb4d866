//! 3D closure terms of the filtered momentum equation.
//!
//! With D̄ the resolved strain rate and K₁ = |D̄|²:
//!
//! ```text
//! τ_ij = 2η² [ ∂ₜū_i ∂ₜū_j /γ_T + ∇ū_i·∇ū_j /γ_L ]
//! K₂   = Σ_mn [ (∂ₜD̄_mn)²/γ_T + ∇D̄_mn·∇D̄_mn /γ_L ]
//! K₃   = (∂ₜK₁)²/γ_T + ∇K₁·∇K₁ /γ_L
//! K̂_ij = ∂ₜK₁ ∂ₜD̄_ij /γ_T + ∇K₁·∇D̄_ij /γ_L
//! S_ij = 2ν [ (1+λ²K₁)^{1/2} + λ²(1+λ²K₁)^{-1/2} K₂ η²
//!             − (λ⁴/4)(1+λ²K₁)^{-3/2} K₃ η² ] D̄_ij
//!        + 2νλ² (1+λ²K₁)^{-1/2} K̂_ij η²
//! ```
//!
//! Dimensional consistency puts ν on the K̂ term as well; the alternate
//! scaling without it is kept selectable so the verification suite can
//! measure the convergence order of both groupings.

use std::sync::Arc;

use crate::error::{LesError, Result};
use crate::fields::{
    central_derivative, time_derivative, BoundaryMode, DerivOrder, FieldHistory3, ScalarField3,
    SymTensor3, TensorField3, TimeDerivOrder, SYM_PAIRS,
};
use crate::filter::{FilterSpec, SmoothField};

use super::ModelParams;

/// Whether the kinematic viscosity multiplies the K̂ cross term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KhatScaling {
    /// ν on the whole flux (dimensionally consistent; the default).
    #[default]
    WithViscosity,
    /// K̂ term without ν, for verification sweeps.
    WithoutViscosity,
}

/// First and second derivatives of the resolved velocity at one point.
#[derive(Debug, Clone, Copy, Default)]
pub struct VelocityJet3 {
    /// grad[i][j] = ∂u_i/∂x_j
    pub grad: [[f64; 3]; 3],
    pub du_dt: [f64; 3],
    /// ddu_dtdx[i][j] = ∂²u_i/∂t∂x_j
    pub ddu_dtdx: [[f64; 3]; 3],
    /// hess[i][j][k] = ∂²u_i/∂x_j∂x_k
    pub hess: [[[f64; 3]; 3]; 3],
}

#[derive(Debug, Clone, Copy)]
pub struct ClosurePoint3 {
    pub tau: SymTensor3,
    pub s: SymTensor3,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub khat: SymTensor3,
}

#[derive(Debug, Clone)]
pub struct ClosureTerms3D {
    pub tau: TensorField3,
    pub s: TensorField3,
    pub k1: ScalarField3,
    pub k2: ScalarField3,
    pub k3: ScalarField3,
    pub khat: TensorField3,
}

/// Shared formula kernel for both the grid and the closed-form paths.
pub fn closure_terms_3d(
    jet: &VelocityJet3,
    p: &ModelParams,
    spec: &FilterSpec,
    scaling: KhatScaling,
) -> ClosurePoint3 {
    let eta2 = spec.eta * spec.eta;
    let (gt, gl) = (spec.gamma_t, spec.gamma_l);
    let l2 = p.lambda * p.lambda;

    // Strain rate and its derivatives from the velocity jet.
    let d = |i: usize, j: usize| 0.5 * (jet.grad[i][j] + jet.grad[j][i]);
    let d_t = |i: usize, j: usize| 0.5 * (jet.ddu_dtdx[i][j] + jet.ddu_dtdx[j][i]);
    let d_x = |i: usize, j: usize, a: usize| 0.5 * (jet.hess[i][j][a] + jet.hess[j][i][a]);

    // Sums over all nine (m,n) pairs; exploit symmetry via the six stored.
    let mut k1 = 0.0;
    let mut k1_t = 0.0;
    let mut k1_x = [0.0; 3];
    let mut k2 = 0.0;
    for (m, n) in SYM_PAIRS {
        let mult = if m == n { 1.0 } else { 2.0 };
        let dmn = d(m, n);
        let dmn_t = d_t(m, n);
        k1 += mult * dmn * dmn;
        k1_t += mult * 2.0 * dmn * dmn_t;
        let mut grad_sq = 0.0;
        for a in 0..3 {
            let dmn_a = d_x(m, n, a);
            k1_x[a] += mult * 2.0 * dmn * dmn_a;
            grad_sq += dmn_a * dmn_a;
        }
        k2 += mult * (dmn_t * dmn_t / gt + grad_sq / gl);
    }
    let k3 = k1_t * k1_t / gt + k1_x.iter().map(|v| v * v).sum::<f64>() / gl;

    let base = 1.0 + l2 * k1;
    let coeff = 2.0
        * p.nu
        * (base.sqrt() + l2 * base.powf(-0.5) * k2 * eta2 - 0.25 * l2 * l2 * base.powf(-1.5) * k3 * eta2);
    let khat_scale = match scaling {
        KhatScaling::WithViscosity => p.nu,
        KhatScaling::WithoutViscosity => 1.0,
    } * 2.0
        * l2
        * base.powf(-0.5)
        * eta2;

    let mut tau = SymTensor3::default();
    let mut s = SymTensor3::default();
    let mut khat = SymTensor3::default();
    for (i, j) in SYM_PAIRS {
        let mut grad_cross = 0.0;
        for a in 0..3 {
            grad_cross += jet.grad[i][a] * jet.grad[j][a];
        }
        tau.set(
            i,
            j,
            2.0 * eta2 * (jet.du_dt[i] * jet.du_dt[j] / gt + grad_cross / gl),
        );
        let mut kh = k1_t * d_t(i, j) / gt;
        for a in 0..3 {
            kh += k1_x[a] * d_x(i, j, a) / gl;
        }
        khat.set(i, j, kh);
        s.set(i, j, coeff * d(i, j) + khat_scale * kh);
    }
    ClosurePoint3 { tau, s, k1, k2, k3, khat }
}

/// Grid-path evaluation from the last two time levels of each component.
pub fn closure_3d(
    histories: &[FieldHistory3; 3],
    p: &ModelParams,
    spec: &FilterSpec,
    bc: BoundaryMode,
    scaling: KhatScaling,
) -> Result<ClosureTerms3D> {
    p.require_half_exponent()?;
    if spec.spatial_dim != 3 {
        return Err(LesError::InvalidParameter(
            "3D closures need a 3D filter spec".into(),
        ));
    }
    let newest: Vec<&ScalarField3> = histories
        .iter()
        .map(|h| {
            h.newest()
                .map(|(_, f)| f)
                .ok_or(LesError::InsufficientHistory { needed: 2, have: 0 })
        })
        .collect::<Result<_>>()?;
    for c in 1..3 {
        if !newest[0].same_grid(newest[c]) {
            return Err(LesError::GridMismatch(
                "velocity components on different grids".into(),
            ));
        }
    }
    let grid = Arc::clone(newest[0].grid());

    // Assemble every needed derivative field once.
    let mut u_t = Vec::with_capacity(3);
    let mut grad = Vec::with_capacity(3);
    let mut dtdx = Vec::with_capacity(3);
    let mut hess = Vec::with_capacity(3);
    for i in 0..3 {
        let ut = time_derivative(&histories[i], TimeDerivOrder::First)?;
        let mut grad_i = Vec::with_capacity(3);
        let mut dtdx_i = Vec::with_capacity(3);
        let mut hess_i = Vec::with_capacity(3);
        for j in 0..3 {
            let gij = central_derivative(newest[i], j, DerivOrder::First, bc)?;
            dtdx_i.push(central_derivative(&ut, j, DerivOrder::First, bc)?);
            let mut hess_ij = Vec::with_capacity(3);
            for k in 0..3 {
                if k == j {
                    hess_ij.push(central_derivative(newest[i], j, DerivOrder::Second, bc)?);
                } else {
                    hess_ij.push(central_derivative(&gij, k, DerivOrder::First, bc)?);
                }
            }
            grad_i.push(gij);
            hess_i.push(hess_ij);
        }
        u_t.push(ut);
        grad.push(grad_i);
        dtdx.push(dtdx_i);
        hess.push(hess_i);
    }

    let n = grid.n_total();
    let mut out = ClosureTerms3D {
        tau: TensorField3::zeros(Arc::clone(&grid)),
        s: TensorField3::zeros(Arc::clone(&grid)),
        k1: ScalarField3::zeros(Arc::clone(&grid)),
        k2: ScalarField3::zeros(Arc::clone(&grid)),
        k3: ScalarField3::zeros(Arc::clone(&grid)),
        khat: TensorField3::zeros(Arc::clone(&grid)),
    };
    for node in 0..n {
        let mut jet = VelocityJet3::default();
        for i in 0..3 {
            jet.du_dt[i] = u_t[i].values()[node];
            for j in 0..3 {
                jet.grad[i][j] = grad[i][j].values()[node];
                jet.ddu_dtdx[i][j] = dtdx[i][j].values()[node];
                for k in 0..3 {
                    jet.hess[i][j][k] = hess[i][j][k].values()[node];
                }
            }
        }
        let pt = closure_terms_3d(&jet, p, spec, scaling);
        out.tau.set_at(node, pt.tau);
        out.s.set_at(node, pt.s);
        out.khat.set_at(node, pt.khat);
        out.k1.values_mut()[node] = pt.k1;
        out.k2.values_mut()[node] = pt.k2;
        out.k3.values_mut()[node] = pt.k3;
    }
    Ok(out)
}

/// Exact derivative jet of three closed-form velocity components.
pub fn jet_from_smooth_fields(
    u: &[&dyn SmoothField; 3],
    t: f64,
    x: &[f64; 3],
) -> VelocityJet3 {
    let mut jet = VelocityJet3::default();
    for i in 0..3 {
        jet.du_dt[i] = u[i].partial(1, &[0, 0, 0], t, x);
        for j in 0..3 {
            let mut o1 = [0usize; 3];
            o1[j] = 1;
            jet.grad[i][j] = u[i].partial(0, &o1, t, x);
            jet.ddu_dtdx[i][j] = u[i].partial(1, &o1, t, x);
            for k in 0..3 {
                let mut o2 = [0usize; 3];
                o2[j] += 1;
                o2[k] += 1;
                jet.hess[i][j][k] = u[i].partial(0, &o2, t, x);
            }
        }
    }
    jet
}

/// Closed-form path at a probe point.
pub fn closure_3d_closed_form(
    ubar: &[&dyn SmoothField; 3],
    p: &ModelParams,
    spec: &FilterSpec,
    scaling: KhatScaling,
    t: f64,
    x: &[f64; 3],
) -> Result<ClosurePoint3> {
    p.require_half_exponent()?;
    let jet = jet_from_smooth_fields(ubar, t, x);
    Ok(closure_terms_3d(&jet, p, spec, scaling))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{Grid, ScalarField};

    fn spec3(eta: f64) -> FilterSpec {
        FilterSpec::three_d(eta, 6.0, 6.0).unwrap()
    }

    fn steady_histories(
        n: usize,
        f: [fn(&[f64; 3]) -> f64; 3],
    ) -> [FieldHistory3; 3] {
        let g = Arc::new(Grid::cube(0.0, 1.0, n, 0.01).unwrap());
        std::array::from_fn(|c| {
            let u = ScalarField::from_fn(Arc::clone(&g), f[c]);
            FieldHistory3::seeded(u, 0.0, 3).unwrap()
        })
    }

    #[test]
    fn uniform_state_gives_all_zero_terms() {
        let p = ModelParams::new(0.4, 2.0, 0.5, 1.0).unwrap();
        let h = steady_histories(5, [|_| 1.2, |_| -0.4, |_| 0.9]);
        let terms =
            closure_3d(&h, &p, &spec3(0.1), BoundaryMode::OneSided, KhatScaling::default())
                .unwrap();
        for node in 0..terms.k1.values().len() {
            assert!(terms.k1.values()[node].abs() < 1e-28);
            assert!(terms.k2.values()[node].abs() < 1e-26);
            assert!(terms.k3.values()[node].abs() < 1e-26);
            assert!(terms.tau.at(node).frobenius_sq() < 1e-60);
            assert!(terms.khat.at(node).frobenius_sq() < 1e-60);
            assert!(terms.s.at(node).frobenius_sq() < 1e-28);
        }
    }

    #[test]
    fn steady_shear_matches_hand_evaluation() {
        let a = 2.0;
        let lambda = 1.5;
        let p = ModelParams::new(0.7, lambda, 0.5, 1.0).unwrap();
        let spec = spec3(0.1);
        let h = steady_histories(5, [|x| 2.0 * x[1], |_| 0.0, |_| 0.0]);
        let terms = closure_3d(&h, &p, &spec, BoundaryMode::OneSided, KhatScaling::default())
            .unwrap();
        let eta2 = spec.eta * spec.eta;
        let k1_exact = a * a / 2.0;
        let s12_exact = p.nu * (1.0 + lambda * lambda * k1_exact).sqrt() * a;
        let tau11_exact = 2.0 * eta2 * a * a / spec.gamma_l;
        for node in 0..terms.k1.values().len() {
            assert!((terms.k1.values()[node] - k1_exact).abs() < 1e-11);
            assert!(terms.k2.values()[node].abs() < 1e-10);
            assert!(terms.k3.values()[node].abs() < 1e-10);
            assert!(terms.khat.at(node).frobenius_sq() < 1e-20);
            let s = terms.s.at(node);
            assert!((s.get(0, 1) - s12_exact).abs() < 1e-11, "{}", s.get(0, 1));
            assert!(s.get(0, 0).abs() < 1e-11);
            assert!(s.get(2, 2).abs() < 1e-11);
            let tau = terms.tau.at(node);
            assert!((tau.get(0, 0) - tau11_exact).abs() < 1e-13);
            for (i, j) in [(0, 1), (0, 2), (1, 1), (1, 2), (2, 2)] {
                assert!(tau.get(i, j).abs() < 1e-13, "tau({i},{j})");
            }
        }
    }

    #[test]
    fn lambda_zero_collapses_to_newtonian_flux() {
        let p = ModelParams::new(0.9, 0.0, 0.5, 1.0).unwrap();
        let spec = spec3(0.05);
        let h = steady_histories(7, [
            |x| (x[1] * 2.9).sin(),
            |x| x[2] * x[2] * 0.4,
            |x| (x[0] * 1.7).cos(),
        ]);
        let terms = closure_3d(&h, &p, &spec, BoundaryMode::OneSided, KhatScaling::default())
            .unwrap();
        let newest: Vec<_> = h.iter().map(|hh| hh.newest().unwrap().1.clone()).collect();
        let u: [ScalarField3; 3] = [newest[0].clone(), newest[1].clone(), newest[2].clone()];
        let d = crate::fields::strain_rate(&u, BoundaryMode::OneSided).unwrap();
        for node in 0..terms.k1.values().len() {
            let s = terms.s.at(node);
            let dd = d.at(node);
            for (i, j) in SYM_PAIRS {
                let exact = 2.0 * p.nu * dd.get(i, j);
                assert!((s.get(i, j) - exact).abs() < 1e-12 * (1.0 + exact.abs()));
            }
        }
    }

    #[test]
    fn adding_a_uniform_velocity_leaves_terms_unchanged() {
        let p = ModelParams::new(0.4, 1.1, 0.5, 1.0).unwrap();
        let spec = spec3(0.1);
        let base = steady_histories(5, [
            |x| (x[1] * 2.9).sin() * 0.3,
            |x| x[0] * x[2],
            |x| (x[0] * 1.7).cos() * 0.2,
        ]);
        let shifted = steady_histories(5, [
            |x| (x[1] * 2.9).sin() * 0.3 + 5.0,
            |x| x[0] * x[2] + 5.0,
            |x| (x[0] * 1.7).cos() * 0.2 + 5.0,
        ]);
        let a = closure_3d(&base, &p, &spec, BoundaryMode::OneSided, KhatScaling::default())
            .unwrap();
        let b = closure_3d(&shifted, &p, &spec, BoundaryMode::OneSided, KhatScaling::default())
            .unwrap();
        for node in 0..a.k1.values().len() {
            assert!((a.k1.values()[node] - b.k1.values()[node]).abs() < 1e-9);
            for (i, j) in SYM_PAIRS {
                assert!((a.s.at(node).get(i, j) - b.s.at(node).get(i, j)).abs() < 1e-9);
                assert!((a.tau.at(node).get(i, j) - b.tau.at(node).get(i, j)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn rejects_wrong_exponent_and_dim() {
        let h = steady_histories(5, [|_| 0.0, |_| 0.0, |_| 0.0]);
        let bad_q = ModelParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(closure_3d(&h, &bad_q, &spec3(0.1), BoundaryMode::OneSided, KhatScaling::default())
            .is_err());
        let p = ModelParams::new(1.0, 1.0, 0.5, 1.0).unwrap();
        let spec1 = FilterSpec::one_d(0.1, 6.0, 6.0).unwrap();
        assert!(closure_3d(&h, &p, &spec1, BoundaryMode::OneSided, KhatScaling::default()).is_err());
    }
}
