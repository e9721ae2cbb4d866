//! Right-hand sides of the three 1D models.
//!
//! All three share the advection term −(½u²)_x (or −u u_x in the
//! non-conservative variant) and differ in the viscous flux:
//!
//! ```text
//! plain:        ν u_xx
//! generalized:  ∂x [ (1+λ²u_x²)^{1/2} u_x ] ν
//! filtered:     ∂x ( S − τ ) with S, τ the gradient closures
//! ```
//!
//! The generalized flux divergence is expanded by the product rule to
//! ν (1+2λ²w²)(1+λ²w²)^{-1/2} u_xx with w = u_x, which makes λ = 0 collapse
//! onto the plain model bit for bit. The filtered model reuses that expanded
//! term for its K₄ part and adds the O(η²) flux ν λ² η² K₅ u_x − τ in
//! divergence form, so its η → 0 limit is the generalized model.

use std::sync::Arc;

use crate::analytic::ForcingSpec;
use crate::closures::{closure_terms_1d, ModelParams, VelocityJet1};
use crate::error::{LesError, Result};
use crate::fields::{central_derivative, BoundaryMode, DerivOrder, FieldHistory1, ScalarField1};
use crate::filter::FilterSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdvectionForm {
    /// −∂x(u²/2)
    Conservative,
    /// −u ∂x u
    NonConservative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdvectionBias {
    Forward,
    Backward,
    Central,
}

/// How the filtered model treats its forcing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ForcingFilterMode {
    /// Exact Gaussian attenuation of each sinusoid (valid at any η·ω).
    #[default]
    ExactGaussian,
    /// O(η²) expansion of the filter; only sane when η·ω is small.
    Taylor,
    /// Unfiltered forcing.
    Raw,
}

pub(crate) enum RhsModel<'a> {
    Plain { nu: f64 },
    Generalized { p: &'a ModelParams },
    Filtered { p: &'a ModelParams, spec: &'a FilterSpec },
}

/// Biased first difference of a value slice.
fn biased_diff(vals: &[f64], dx: f64, bias: AdvectionBias, bc: BoundaryMode) -> Vec<f64> {
    let n = vals.len();
    let mut out = vec![0.0; n];
    match bc {
        BoundaryMode::Periodic => {
            let m = n - 1;
            let at = |i: isize| vals[(i.rem_euclid(m as isize)) as usize];
            for j in 0..m {
                let j = j as isize;
                out[j as usize] = match bias {
                    AdvectionBias::Forward => (at(j + 1) - at(j)) / dx,
                    AdvectionBias::Backward => (at(j) - at(j - 1)) / dx,
                    AdvectionBias::Central => (at(j + 1) - at(j - 1)) / (2.0 * dx),
                };
            }
            out[n - 1] = out[0];
        }
        BoundaryMode::OneSided => {
            for j in 0..n {
                out[j] = match bias {
                    AdvectionBias::Forward => {
                        if j + 1 < n {
                            (vals[j + 1] - vals[j]) / dx
                        } else {
                            (vals[j] - vals[j - 1]) / dx
                        }
                    }
                    AdvectionBias::Backward => {
                        if j > 0 {
                            (vals[j] - vals[j - 1]) / dx
                        } else {
                            (vals[j + 1] - vals[j]) / dx
                        }
                    }
                    AdvectionBias::Central => {
                        if j == 0 {
                            (-3.0 * vals[0] + 4.0 * vals[1] - vals[2]) / (2.0 * dx)
                        } else if j == n - 1 {
                            (3.0 * vals[n - 1] - 4.0 * vals[n - 2] + vals[n - 3]) / (2.0 * dx)
                        } else {
                            (vals[j + 1] - vals[j - 1]) / (2.0 * dx)
                        }
                    }
                };
            }
        }
    }
    out
}

pub(crate) fn rhs_with_bias(
    prev: Option<&ScalarField1>,
    u: &ScalarField1,
    model: &RhsModel,
    forcing: Option<&ForcingSpec>,
    t: f64,
    bc: BoundaryMode,
    adv_form: AdvectionForm,
    bias: AdvectionBias,
) -> Result<ScalarField1> {
    let grid = Arc::clone(u.grid());
    let n = grid.n_total();
    let dx = grid.dx(0);
    let vals = u.values();

    // Advection.
    let mut rhs: Vec<f64> = match adv_form {
        AdvectionForm::Conservative => {
            let flux: Vec<f64> = vals.iter().map(|&v| 0.5 * v * v).collect();
            biased_diff(&flux, dx, bias, bc).into_iter().map(|d| -d).collect()
        }
        AdvectionForm::NonConservative => biased_diff(vals, dx, bias, bc)
            .into_iter()
            .zip(vals)
            .map(|(d, &v)| -v * d)
            .collect(),
    };

    // Viscous flux divergence; central in every stage.
    let u_xx = central_derivative(u, 0, DerivOrder::Second, bc)?;
    match model {
        RhsModel::Plain { nu } => {
            for (r, &d2) in rhs.iter_mut().zip(u_xx.values()) {
                *r += nu * d2;
            }
        }
        RhsModel::Generalized { p } => {
            let u_x = central_derivative(u, 0, DerivOrder::First, bc)?;
            let l2 = p.lambda * p.lambda;
            for i in 0..n {
                let w2 = u_x.values()[i] * u_x.values()[i];
                let coef = (1.0 + 2.0 * l2 * w2) / (1.0 + l2 * w2).sqrt();
                rhs[i] += coef * p.nu * u_xx.values()[i];
            }
        }
        RhsModel::Filtered { p, spec } => {
            let prev = prev.ok_or(LesError::InsufficientHistory { needed: 2, have: 1 })?;
            let dt = grid.dt();
            let u_x = central_derivative(u, 0, DerivOrder::First, bc)?;
            let u_t = u.zip_map(prev, |a, b| (a - b) / dt)?;
            let u_tx = central_derivative(&u_t, 0, DerivOrder::First, bc)?;
            let l2 = p.lambda * p.lambda;
            let eta2 = spec.eta * spec.eta;
            let mut q = vec![0.0; n];
            for i in 0..n {
                let jet = VelocityJet1 {
                    u_t: u_t.values()[i],
                    u_x: u_x.values()[i],
                    u_xx: u_xx.values()[i],
                    u_tx: u_tx.values()[i],
                };
                let pt = closure_terms_1d(&jet, p, spec);
                // K₄ part of ∂x S in expanded form, matching the generalized model.
                let w2 = jet.u_x * jet.u_x;
                let coef = (1.0 + 2.0 * l2 * w2) / (1.0 + l2 * w2).sqrt();
                rhs[i] += coef * p.nu * jet.u_xx;
                // O(η²) remainder of S minus τ, kept in flux form.
                q[i] = p.nu * l2 * pt.k5 * eta2 * jet.u_x - pt.tau;
            }
            let q_x = biased_diff(&q, dx, AdvectionBias::Central, bc);
            for i in 0..n {
                rhs[i] += q_x[i];
            }
        }
    }

    // Forcing.
    if let Some(f) = forcing {
        for i in 0..n {
            let x = grid.coord(grid.unflatten(i))[0];
            rhs[i] += f.value(t, x);
        }
    }
    ScalarField1::from_values(grid, rhs)
}

/// RHS of plain Burgers u_t = ν u_xx + f − (½u²)_x with central differences.
pub fn rhs_plain(
    u: &ScalarField1,
    nu: f64,
    forcing: Option<&ForcingSpec>,
    t: f64,
    bc: BoundaryMode,
    adv: AdvectionForm,
) -> Result<ScalarField1> {
    rhs_with_bias(None, u, &RhsModel::Plain { nu }, forcing, t, bc, adv, AdvectionBias::Central)
}

/// RHS of the generalized model with the nonlinear viscous flux.
pub fn rhs_generalized(
    u: &ScalarField1,
    p: &ModelParams,
    forcing: Option<&ForcingSpec>,
    t: f64,
    bc: BoundaryMode,
    adv: AdvectionForm,
) -> Result<ScalarField1> {
    rhs_with_bias(None, u, &RhsModel::Generalized { p }, forcing, t, bc, adv, AdvectionBias::Central)
}

/// Filter the forcing per mode before it enters a filtered-model RHS.
pub fn filter_forcing(
    f: &ForcingSpec,
    spec: &FilterSpec,
    mode: ForcingFilterMode,
) -> ForcingSpec {
    match mode {
        ForcingFilterMode::Raw => f.clone(),
        ForcingFilterMode::ExactGaussian => f.gaussian_filtered(spec),
        ForcingFilterMode::Taylor => {
            // Expansion applied termwise: each sinusoid is an eigenfunction,
            // picking up the factor 1 − ω²η²/γ.
            ForcingSpec {
                mean: f.mean,
                spatial: f
                    .spatial
                    .iter()
                    .map(|&(a, k)| {
                        (a * (1.0 - k * k * spec.eta * spec.eta / spec.gamma_l), k)
                    })
                    .collect(),
                temporal: f
                    .temporal
                    .iter()
                    .map(|&(b, w)| {
                        (b * (1.0 - w * w * spec.eta * spec.eta / spec.gamma_t), w)
                    })
                    .collect(),
            }
        }
    }
}

/// RHS of the filtered model: f̄ + ∂x(S − τ) − (½ū²)_x, time derivatives from
/// the newest two history levels.
pub fn rhs_filtered(
    history: &FieldHistory1,
    p: &ModelParams,
    spec: &FilterSpec,
    forcing: Option<&ForcingSpec>,
    forcing_mode: ForcingFilterMode,
    t: f64,
    bc: BoundaryMode,
    adv: AdvectionForm,
) -> Result<ScalarField1> {
    p.require_half_exponent()?;
    if history.len() < 2 {
        return Err(LesError::InsufficientHistory { needed: 2, have: history.len() });
    }
    let (_, u) = history.level(0).unwrap();
    let (_, prev) = history.level(1).unwrap();
    let filtered_forcing = forcing.map(|f| filter_forcing(f, spec, forcing_mode));
    rhs_with_bias(
        Some(prev),
        u,
        &RhsModel::Filtered { p, spec },
        filtered_forcing.as_ref(),
        t,
        bc,
        adv,
        AdvectionBias::Central,
    )
}
