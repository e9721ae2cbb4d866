//! Closed-form space-time fields with exact partial derivatives.
//!
//! Filter-identity verification needs globally defined fields whose partials
//! of any order are available without discretization error, so the quadrature
//! oracle is never polluted by stencil or boundary truncation.

use std::f64::consts::FRAC_PI_2;

/// A smooth function of (t, x₁..x_d) with exact mixed partial derivatives.
///
/// `partial(a, b, t, x)` returns ∂ₜᵃ ∂ₓ^b f; implementations may support only
/// the orders they need and must panic with a clear message beyond that.
pub trait SmoothField: Sync {
    fn spatial_dim(&self) -> usize;

    fn partial(&self, t_order: usize, x_orders: &[usize], t: f64, x: &[f64]) -> f64;

    fn value(&self, t: f64, x: &[f64]) -> f64 {
        let zeros = [0usize; 3];
        self.partial(0, &zeros[..self.spatial_dim()], t, x)
    }
}

/// One separable factor of a term, with derivatives of every order.
#[derive(Debug, Clone)]
pub enum Factor {
    /// Constant 1.
    One,
    /// sin(ω s + φ); derivatives rotate the phase by π/2.
    Sin { omega: f64, phase: f64 },
    /// e^(r s).
    Exp { rate: f64 },
    /// c₀ + c₁ s + c₂ s² + ...
    Poly(Vec<f64>),
}

impl Factor {
    fn eval(&self, order: usize, s: f64) -> f64 {
        match self {
            Factor::One => {
                if order == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            Factor::Sin { omega, phase } => {
                omega.powi(order as i32) * (omega * s + phase + order as f64 * FRAC_PI_2).sin()
            }
            Factor::Exp { rate } => rate.powi(order as i32) * (rate * s).exp(),
            Factor::Poly(c) => {
                let mut acc = 0.0;
                for (k, &ck) in c.iter().enumerate().skip(order) {
                    // d^order/ds^order of s^k = k!/(k-order)! s^(k-order)
                    let mut fac = 1.0;
                    for m in 0..order {
                        fac *= (k - m) as f64;
                    }
                    acc += ck * fac * s.powi((k - order) as i32);
                }
                acc
            }
        }
    }
}

/// coef · T(t) · Π_a X_a(x_a)
#[derive(Debug, Clone)]
pub struct SeparableTerm {
    pub coef: f64,
    pub time: Factor,
    pub space: Vec<Factor>,
}

/// Sum of separable closed-form terms; supports partials of any order.
#[derive(Debug, Clone)]
pub struct ModeSum {
    dim: usize,
    terms: Vec<SeparableTerm>,
}

impl ModeSum {
    pub fn new(dim: usize) -> Self {
        Self { dim, terms: Vec::new() }
    }

    pub fn with_term(mut self, coef: f64, time: Factor, space: Vec<Factor>) -> Self {
        assert_eq!(space.len(), self.dim, "space factor count must match dim");
        self.terms.push(SeparableTerm { coef, time, space });
        self
    }

    /// c (constant field).
    pub fn constant(dim: usize, c: f64) -> Self {
        let space = vec![Factor::One; dim];
        Self::new(dim).with_term(c, Factor::One, space)
    }

    /// 1D steady sinusoid a·sin(ωx + φ).
    pub fn sin_x(amp: f64, omega: f64, phase: f64) -> Self {
        Self::new(1).with_term(amp, Factor::One, vec![Factor::Sin { omega, phase }])
    }

    /// 1D traveling wave a·sin(ω_x x − ω_t t + φ), expanded into two
    /// separable terms.
    pub fn traveling_wave_1d(amp: f64, omega_x: f64, omega_t: f64, phase: f64) -> Self {
        Self::new(1)
            .with_term(
                amp,
                Factor::Sin { omega: -omega_t, phase: 0.0 },
                vec![Factor::Sin { omega: omega_x, phase: phase + FRAC_PI_2 }],
            )
            .with_term(
                amp,
                Factor::Sin { omega: -omega_t, phase: FRAC_PI_2 },
                vec![Factor::Sin { omega: omega_x, phase }],
            )
    }

    /// 1D polynomial in x with steady coefficients.
    pub fn poly_x(coeffs: Vec<f64>) -> Self {
        Self::new(1).with_term(1.0, Factor::One, vec![Factor::Poly(coeffs)])
    }

    /// Product of a polynomial in t and one in x.
    pub fn poly_tx(t_coeffs: Vec<f64>, x_coeffs: Vec<f64>) -> Self {
        Self::new(1).with_term(1.0, Factor::Poly(t_coeffs), vec![Factor::Poly(x_coeffs)])
    }
}

impl SmoothField for ModeSum {
    fn spatial_dim(&self) -> usize {
        self.dim
    }

    fn partial(&self, t_order: usize, x_orders: &[usize], t: f64, x: &[f64]) -> f64 {
        debug_assert_eq!(x_orders.len(), self.dim);
        debug_assert_eq!(x.len(), self.dim);
        let mut acc = 0.0;
        for term in &self.terms {
            let mut v = term.coef * term.time.eval(t_order, t);
            for a in 0..self.dim {
                v *= term.space[a].eval(x_orders[a], x[a]);
            }
            acc += v;
        }
        acc
    }
}

/// Field defined by a plain closure; values only, no derivatives.
///
/// Handy for quadrature integrands (the brute-force filter needs values only).
pub struct FnField<F: Fn(f64, &[f64]) -> f64 + Sync> {
    dim: usize,
    f: F,
}

impl<F: Fn(f64, &[f64]) -> f64 + Sync> FnField<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(f64, &[f64]) -> f64 + Sync> SmoothField for FnField<F> {
    fn spatial_dim(&self) -> usize {
        self.dim
    }

    fn partial(&self, t_order: usize, x_orders: &[usize], t: f64, x: &[f64]) -> f64 {
        if t_order != 0 || x_orders.iter().any(|&o| o != 0) {
            panic!("FnField provides values only, not derivatives");
        }
        (self.f)(t, x)
    }
}

/// A twice-differentiable scalar map β used in composite filter identities.
pub trait SmoothScalarMap: Sync {
    fn eval(&self, s: f64) -> f64;
    fn d1(&self, s: f64) -> f64;
    fn d2(&self, s: f64) -> f64;
}

/// β(s) = s
pub struct IdentityMap;

impl SmoothScalarMap for IdentityMap {
    fn eval(&self, s: f64) -> f64 {
        s
    }
    fn d1(&self, _: f64) -> f64 {
        1.0
    }
    fn d2(&self, _: f64) -> f64 {
        0.0
    }
}

/// β(s) = c
pub struct ConstMap(pub f64);

impl SmoothScalarMap for ConstMap {
    fn eval(&self, _: f64) -> f64 {
        self.0
    }
    fn d1(&self, _: f64) -> f64 {
        0.0
    }
    fn d2(&self, _: f64) -> f64 {
        0.0
    }
}

/// β(s) = s²
pub struct SquareMap;

impl SmoothScalarMap for SquareMap {
    fn eval(&self, s: f64) -> f64 {
        s * s
    }
    fn d1(&self, s: f64) -> f64 {
        2.0 * s
    }
    fn d2(&self, _: f64) -> f64 {
        2.0
    }
}

/// β(s) = (1 + λ²s²)^(1/2), the flux nonlinearity of the generalized model.
pub struct SqrtOnePlusSq {
    pub lambda: f64,
}

impl SmoothScalarMap for SqrtOnePlusSq {
    fn eval(&self, s: f64) -> f64 {
        (1.0 + self.lambda * self.lambda * s * s).sqrt()
    }
    fn d1(&self, s: f64) -> f64 {
        let l2 = self.lambda * self.lambda;
        l2 * s / (1.0 + l2 * s * s).sqrt()
    }
    fn d2(&self, s: f64) -> f64 {
        let l2 = self.lambda * self.lambda;
        l2 / (1.0 + l2 * s * s).powf(1.5)
    }
}
