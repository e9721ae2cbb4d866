//! Nonlinear effective viscosity and the subgrid closure terms.
//!
//! The constitutive law replaces the constant dynamic viscosity μ₀ by
//!
//! ```text
//! μ_e(|D|) = μ₀ (1 + λ² |D|²)^q
//! ```
//!
//! with |D| the Frobenius norm of the strain rate. The filtered models fix
//! q = 1/2; filtering the resulting flux and expanding to O(η²) produces the
//! gradient-type closure terms evaluated here, in 1D and 3D.

mod one_d;
mod three_d;

pub use one_d::{
    closure_1d, closure_1d_closed_form, closure_terms_1d, ClosurePoint1, ClosureTerms1D,
    VelocityJet1,
};
pub use three_d::{
    closure_3d, closure_3d_closed_form, closure_terms_3d, jet_from_smooth_fields, ClosurePoint3,
    ClosureTerms3D, KhatScaling, VelocityJet3,
};

use std::sync::Arc;

use crate::error::{LesError, Result};
use crate::fields::{strain_rate, BoundaryMode, ScalarField3, TensorField3, SYM_PAIRS};

/// Model constants: kinematic viscosity ν = μ₀/ρ₀, nonlinearity scale λ,
/// exponent q, and reference density ρ₀.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub nu: f64,
    pub lambda: f64,
    pub q: f64,
    pub rho0: f64,
}

impl ModelParams {
    pub fn new(nu: f64, lambda: f64, q: f64, rho0: f64) -> Result<Self> {
        if !(nu > 0.0) {
            return Err(LesError::InvalidParameter(format!("nu must be > 0, got {nu}")));
        }
        if !(lambda >= 0.0) {
            return Err(LesError::InvalidParameter(format!(
                "lambda must be >= 0, got {lambda}"
            )));
        }
        if !(q >= 0.0) {
            return Err(LesError::InvalidParameter(format!("q must be >= 0, got {q}")));
        }
        if !(rho0 > 0.0) {
            return Err(LesError::InvalidParameter(format!("rho0 must be > 0, got {rho0}")));
        }
        Ok(Self { nu, lambda, q, rho0 })
    }

    /// Newtonian limit: λ = 0, q = 1/2, unit density.
    pub fn newtonian(nu: f64) -> Result<Self> {
        Self::new(nu, 0.0, 0.5, 1.0)
    }

    pub fn mu0(&self) -> f64 {
        self.nu * self.rho0
    }

    /// The filtered closures are derived for q = 1/2 only.
    pub(crate) fn require_half_exponent(&self) -> Result<()> {
        if self.q != 0.5 {
            return Err(LesError::InvalidParameter(format!(
                "filtered closures require q = 1/2, got q = {}",
                self.q
            )));
        }
        Ok(())
    }
}

/// μ_e(|D|) = μ₀ (1 + λ²|D|²)^q; monotone in |D| for q > 0.
pub fn effective_viscosity(d_norm: f64, p: &ModelParams) -> Result<f64> {
    if d_norm < 0.0 {
        return Err(LesError::InvalidParameter(format!(
            "strain-rate norm must be nonnegative, got {d_norm}"
        )));
    }
    Ok(p.mu0() * (1.0 + p.lambda * p.lambda * d_norm * d_norm).powf(p.q))
}

/// Stress tensor T = −p I + 2 μ_e(|D|) D of a resolved velocity/pressure pair.
pub fn stress_tensor(
    u: &[ScalarField3; 3],
    p: &ModelParams,
    pressure: &ScalarField3,
    bc: BoundaryMode,
) -> Result<TensorField3> {
    if !u[0].same_grid(pressure) {
        return Err(LesError::GridMismatch(
            "pressure and velocity on different grids".into(),
        ));
    }
    let d = strain_rate(u, bc)?;
    let grid = Arc::clone(d.grid());
    let mut out = TensorField3::zeros(grid);
    for node in 0..d.n_nodes() {
        let dn = d.at(node);
        let mu = effective_viscosity(dn.frobenius(), p)?;
        let mut t = dn.scale(2.0 * mu);
        for i in 0..3 {
            t.set(i, i, t.get(i, i) - pressure.values()[node]);
        }
        for (i, j) in SYM_PAIRS {
            out.component_mut(i, j)[node] = t.get(i, j);
        }
    }
    Ok(out)
}
