//! Exact Burgers solutions and the forced-periodic benchmark scenario.
//!
//! The solution family is the Cole–Hopf form u = −2ν φ_x/φ with
//!
//! ```text
//! φ(t,x) = A₀ + B₀x + [A₁ sin(ω₁x) + B₁ cos(ω₁x)] e^(−νω₁²t)
//!        + [A₂ sin(ω₂x) + B₂ cos(ω₂x)] e^(−νω₂²t)
//! ```
//!
//! φ solves the heat equation, so u solves u_t + u u_x = ν u_xx exactly;
//! all evaluation is closed-form and carries no discretization error.

mod forcing;

pub use forcing::ForcingSpec;

use crate::error::{LesError, Result};
use crate::filter::{FilterOracle, FilterSpec, SmoothField};

/// Constants of the Cole–Hopf solution family.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSolutionSpec {
    pub a0: f64,
    pub b0: f64,
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub nu: f64,
}

/// φ and the partials used by the quotient rule.
#[derive(Debug, Clone, Copy, Default)]
pub struct PhiPartials {
    pub v: f64,
    pub t: f64,
    pub tt: f64,
    pub x: f64,
    pub xx: f64,
    pub xxx: f64,
    pub tx: f64,
    pub txx: f64,
    pub ttx: f64,
}

/// u and its exact first/second partials.
#[derive(Debug, Clone, Copy, Default)]
pub struct UDerivs {
    pub u: f64,
    pub u_t: f64,
    pub u_x: f64,
    pub u_xx: f64,
    pub u_tx: f64,
    pub u_tt: f64,
}

pub fn phi(t: f64, x: f64, spec: &AnalyticSolutionSpec) -> f64 {
    phi_partials(t, x, spec).v
}

pub fn phi_partials(t: f64, x: f64, spec: &AnalyticSolutionSpec) -> PhiPartials {
    let mut p = PhiPartials {
        v: spec.a0 + spec.b0 * x,
        x: spec.b0,
        ..Default::default()
    };
    for (a, b, omega) in [
        (spec.a1, spec.b1, spec.omega1),
        (spec.a2, spec.b2, spec.omega2),
    ] {
        let rate = -spec.nu * omega * omega;
        let e = (rate * t).exp();
        let s = (omega * x).sin();
        let c = (omega * x).cos();
        let m = a * s + b * c; // the mode
        let mx = omega * (a * c - b * s); // ∂x mode
        let mxx = -omega * omega * m;
        let mxxx = -omega * omega * mx;
        p.v += m * e;
        p.t += rate * m * e;
        p.tt += rate * rate * m * e;
        p.x += mx * e;
        p.xx += mxx * e;
        p.xxx += mxxx * e;
        p.tx += rate * mx * e;
        p.txx += rate * mxx * e;
        p.ttx += rate * rate * mx * e;
    }
    p
}

/// u = −2ν φ_x/φ.
pub fn analytic_u(t: f64, x: f64, spec: &AnalyticSolutionSpec) -> Result<f64> {
    Ok(analytic_u_derivs(t, x, spec)?.u)
}

/// u with exact partials by the quotient rule on r = φ_x/φ.
pub fn analytic_u_derivs(t: f64, x: f64, spec: &AnalyticSolutionSpec) -> Result<UDerivs> {
    let p = phi_partials(t, x, spec);
    if p.v.abs() < 1e-12 * (1.0 + spec.a0.abs()) {
        return Err(LesError::PhiVanishes { t, x, phi: p.v });
    }
    let r = p.x / p.v;
    let r_x = (p.xx - r * p.x) / p.v;
    let r_t = (p.tx - r * p.t) / p.v;
    let r_xx = (p.xxx - r * p.xx) / p.v - 2.0 * r_x * p.x / p.v;
    let r_tx = (p.txx - r_t * p.x - r * p.tx) / p.v - r_x * p.t / p.v;
    let r_tt = (p.ttx - r * p.tt) / p.v - 2.0 * r_t * p.t / p.v;
    let c = -2.0 * spec.nu;
    Ok(UDerivs {
        u: c * r,
        u_t: c * r_t,
        u_x: c * r_x,
        u_xx: c * r_xx,
        u_tx: c * r_tx,
        u_tt: c * r_tt,
    })
}

/// Validate that φ never vanishes (keeps one sign) on a space-time box,
/// by dense sampling.
pub fn validate_phi_nonvanishing(
    spec: &AnalyticSolutionSpec,
    x_range: (f64, f64),
    t_range: (f64, f64),
    samples_per_axis: usize,
) -> Result<()> {
    let n = samples_per_axis.max(2);
    let sign = phi(t_range.0, x_range.0, spec).signum();
    for i in 0..n {
        let t = t_range.0 + (t_range.1 - t_range.0) * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let x = x_range.0 + (x_range.1 - x_range.0) * j as f64 / (n - 1) as f64;
            let v = phi(t, x, spec);
            if v == 0.0 || v.signum() != sign {
                return Err(LesError::PhiVanishes { t, x, phi: v });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetId {
    Set1,
    Set2,
    Set3,
}

impl std::str::FromStr for PresetId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "set1" => Ok(PresetId::Set1),
            "set2" => Ok(PresetId::Set2),
            "set3" => Ok(PresetId::Set3),
            other => Err(format!("unknown preset `{other}` (expected set1|set2|set3)")),
        }
    }
}

impl std::fmt::Display for PresetId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PresetId::Set1 => write!(f, "set1"),
            PresetId::Set2 => write!(f, "set2"),
            PresetId::Set3 => write!(f, "set3"),
        }
    }
}

/// A solution spec bundled with the filter width and nonlinearity scale it
/// is benchmarked with.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub id: PresetId,
    pub spec: AnalyticSolutionSpec,
    pub eta: f64,
    pub lambda: f64,
}

/// The three benchmark constant sets.
pub fn preset(id: PresetId) -> Preset {
    use std::f64::consts::PI;
    match id {
        PresetId::Set1 => Preset {
            id,
            spec: AnalyticSolutionSpec {
                a0: 1000.0,
                b0: -10.0,
                a1: 1.0 / PI,
                b1: 0.0,
                a2: 1.0 / (100.0 * PI),
                b2: 0.0,
                omega1: 2.0 * PI,
                omega2: 50.0 * PI,
                nu: 1.0 / 50000.0,
            },
            eta: 0.1,
            lambda: 1.8e6,
        },
        PresetId::Set2 => Preset {
            id,
            spec: AnalyticSolutionSpec {
                a0: 10.0,
                b0: -7.0,
                a1: 3.0 / PI,
                b1: 0.0,
                a2: 3.0 / (100.0 * PI),
                b2: 0.0,
                omega1: 2.0 * PI,
                omega2: 50.0 * PI,
                nu: 1.0 / 50000.0,
            },
            eta: 0.1,
            lambda: 5000.0,
        },
        PresetId::Set3 => Preset {
            id,
            spec: AnalyticSolutionSpec {
                a0: 1.0,
                b0: -10.0,
                a1: -15.0 / PI,
                b1: -7.0 / PI,
                a2: 1.0 / (10.0 * PI),
                b2: -1.0 / (100.0 * PI),
                omega1: 2.0 * PI,
                omega2: 100.0 * PI,
                nu: 1.0 / 50000.0,
            },
            eta: 0.01,
            lambda: 500.0,
        },
    }
}

/// The exact solution as a smooth field (partials up to total order two).
pub struct AnalyticU<'a>(pub &'a AnalyticSolutionSpec);

impl SmoothField for AnalyticU<'_> {
    fn spatial_dim(&self) -> usize {
        1
    }

    fn partial(&self, t_order: usize, x_orders: &[usize], t: f64, x: &[f64]) -> f64 {
        let d = analytic_u_derivs(t, x[0], self.0)
            .expect("analytic solution evaluated where phi vanishes");
        match (t_order, x_orders[0]) {
            (0, 0) => d.u,
            (1, 0) => d.u_t,
            (0, 1) => d.u_x,
            (0, 2) => d.u_xx,
            (1, 1) => d.u_tx,
            (2, 0) => d.u_tt,
            other => panic!("partial {other:?} not available for the Cole-Hopf field"),
        }
    }
}

/// Brute-force filtered value of the exact solution: the fair reference for
/// filtered-model runs.
pub fn filtered_reference(
    u_spec: &AnalyticSolutionSpec,
    oracle: &FilterOracle,
    t: f64,
    x: f64,
) -> Result<f64> {
    oracle.filter(&AnalyticU(u_spec), t, &[x])
}

/// Convenience: build a 1D oracle for a filter spec.
pub fn reference_oracle(filter: &FilterSpec, nodes: usize) -> FilterOracle {
    FilterOracle::new(filter.clone(), nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    #[test]
    fn preset_values_pin_the_constant_sets() {
        let p1 = preset(PresetId::Set1);
        assert_eq!(p1.lambda, 1.8e6);
        assert_eq!(p1.eta, 0.1);
        assert_eq!(p1.spec.a0, 1000.0);
        assert_eq!(p1.spec.omega2, 50.0 * PI);
        let p2 = preset(PresetId::Set2);
        assert_eq!(p2.spec.a1, 3.0 / PI);
        assert_eq!(p2.lambda, 5000.0);
        let p3 = preset(PresetId::Set3);
        assert_eq!(p3.eta, 0.01);
        assert_eq!(p3.lambda, 500.0);
        assert_eq!(p3.spec.b1, -7.0 / PI);
        assert_eq!(p3.spec.omega2, 100.0 * PI);
    }

    #[test]
    fn phi_values_at_origin_for_set1() {
        let p = preset(PresetId::Set1);
        let pp = phi_partials(0.0, 0.0, &p.spec);
        assert_eq!(pp.v, 1000.0);
        // φ_x(0,0) = B₀ + A₁ω₁ + A₂ω₂ = −10 + 2 + 0.5
        assert!((pp.x + 7.5).abs() < 1e-12, "{}", pp.x);
        let u = analytic_u(0.0, 0.0, &p.spec).unwrap();
        assert!((u - 3e-7).abs() < 1e-19, "{u}");
    }

    #[test]
    fn steady_rational_profile_when_modes_vanish() {
        let spec = AnalyticSolutionSpec {
            a0: 5.0,
            b0: 2.0,
            a1: 0.0,
            b1: 0.0,
            a2: 0.0,
            b2: 0.0,
            omega1: 1.0,
            omega2: 2.0,
            nu: 0.01,
        };
        for (t, x) in [(0.0, 0.3), (1.7, 0.9)] {
            let d = analytic_u_derivs(t, x, &spec).unwrap();
            let exact = -2.0 * spec.nu * spec.b0 / (spec.a0 + spec.b0 * x);
            assert!((d.u - exact).abs() < 1e-15);
            assert_eq!(d.u_t, 0.0);
        }
        let pp = phi_partials(0.5, 0.2, &spec);
        assert_eq!(pp.t, 0.0);
        assert_eq!(pp.xx, 0.0);
    }

    #[test]
    fn pde_residual_vanishes_at_random_probes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for id in [PresetId::Set1, PresetId::Set2, PresetId::Set3] {
            let p = preset(id);
            let mut worst: f64 = 0.0;
            for _ in 0..10_000 {
                let t = rng.gen_range(0.0..1.0);
                let x = rng.gen_range(0.0..1.0);
                let d = analytic_u_derivs(t, x, &p.spec).unwrap();
                let res = d.u_t + d.u * d.u_x - p.spec.nu * d.u_xx;
                worst = worst.max(res.abs() / (1.0 + d.u_t.abs()));
            }
            assert!(worst <= 1e-9, "{id}: residual {worst}");
        }
    }

    #[test]
    fn exact_partials_match_finite_differences() {
        let p = preset(PresetId::Set3);
        let h = 1e-5;
        for (t, x) in [(0.3, 0.41), (0.8, 0.13)] {
            let d = analytic_u_derivs(t, x, &p.spec).unwrap();
            let up = analytic_u(t, x + h, &p.spec).unwrap();
            let um = analytic_u(t, x - h, &p.spec).unwrap();
            let fd_x = (up - um) / (2.0 * h);
            assert!((d.u_x - fd_x).abs() < 1e-6 * (1.0 + d.u_x.abs()), "{} vs {fd_x}", d.u_x);
            let vp = analytic_u(t + h, x, &p.spec).unwrap();
            let vm = analytic_u(t - h, x, &p.spec).unwrap();
            let fd_t = (vp - vm) / (2.0 * h);
            assert!((d.u_t - fd_t).abs() < 1e-6 * (1.0 + d.u_t.abs()));
            let fd_xx = (up - 2.0 * d.u + um) / (h * h);
            assert!((d.u_xx - fd_xx).abs() < 1e-3 * (1.0 + d.u_xx.abs()));
        }
    }

    #[test]
    fn phi_is_sign_definite_on_the_unit_box_for_all_presets() {
        // Presets 1 and 2 are positive; preset 3 is negative throughout,
        // which is equally valid for the quotient u = −2ν φ_x/φ.
        for id in [PresetId::Set1, PresetId::Set2, PresetId::Set3] {
            let p = preset(id);
            validate_phi_nonvanishing(&p.spec, (0.0, 1.0), (0.0, 1.0), 1000).unwrap();
        }
        assert!(phi(0.0, 0.5, &preset(PresetId::Set1).spec) > 0.0);
        assert!(phi(0.0, 0.5, &preset(PresetId::Set3).spec) < 0.0);
    }

    #[test]
    fn filtered_reference_approaches_raw_solution_as_eta_shrinks() {
        use crate::fields::fit_loglog_slope;
        let p = preset(PresetId::Set2);
        let mut pairs = Vec::new();
        // η small enough that η·ω₂ < 1, otherwise the fast mode is simply
        // removed by the filter and the difference saturates at its amplitude.
        for k in 0..3 {
            let eta = 0.004 / 2f64.powi(k);
            let filter = FilterSpec::one_d(eta, 6.0, 6.0).unwrap();
            let oracle = reference_oracle(&filter, 32);
            let mut worst: f64 = 0.0;
            for x in [0.25, 0.5, 0.75] {
                let fr = filtered_reference(&p.spec, &oracle, 0.5, x).unwrap();
                let raw = analytic_u(0.5, x, &p.spec).unwrap();
                worst = worst.max((fr - raw).abs());
            }
            pairs.push((eta, worst));
        }
        let slope = fit_loglog_slope(&pairs);
        assert!(slope >= 1.9, "slope {slope}, pairs {pairs:?}");
    }

    #[test]
    fn filtered_reference_of_zero_solution_is_zero() {
        let spec = AnalyticSolutionSpec {
            a0: 1.0,
            b0: 0.0,
            a1: 0.0,
            b1: 0.0,
            a2: 0.0,
            b2: 0.0,
            omega1: 1.0,
            omega2: 2.0,
            nu: 0.01,
        };
        let filter = FilterSpec::one_d(0.1, 6.0, 6.0).unwrap();
        let oracle = reference_oracle(&filter, 32);
        let v = filtered_reference(&spec, &oracle, 0.2, 0.6).unwrap();
        assert!(v.abs() < 1e-14);
    }
}
