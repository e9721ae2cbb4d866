//! Gauss–Hermite and Gauss–Legendre quadrature rules.

use std::f64::consts::PI;

/// Gauss–Hermite rule: ∫ e^(−z²) f(z) dz ≈ Σ wᵢ f(zᵢ) over (−∞, ∞).
///
/// Nodes and weights come from Newton iteration on the orthonormal Hermite
/// recurrence (Golub–Welsch equivalent); a rule with n nodes integrates
/// polynomials of degree 2n−1 exactly.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quadrature needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let pim4 = PI.powf(-0.25);
        let m = (n + 1) / 2;
        let mut z = 0.0_f64;
        for i in 0..m {
            // Initial guesses for the i-th largest root.
            z = match i {
                0 => ((2 * n + 1) as f64).sqrt() - 1.85575 * ((2 * n + 1) as f64).powf(-1.0 / 6.0),
                1 => z - 1.14 * (n as f64).powf(0.426) / z,
                2 => 1.86 * z - 0.86 * nodes[0],
                3 => 1.91 * z - 0.91 * nodes[1],
                _ => 2.0 * z - nodes[i - 2],
            };
            let mut pp = 0.0;
            for _ in 0..100 {
                // Orthonormal Hermite recurrence up to degree n.
                let mut p1 = pim4;
                let mut p2 = 0.0;
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    p1 = z * (2.0 / (j as f64 + 1.0)).sqrt() * p2
                        - (j as f64 / (j as f64 + 1.0)).sqrt() * p3;
                }
                pp = (2.0 * n as f64).sqrt() * p2;
                let dz = p1 / pp;
                z -= dz;
                if dz.abs() < 1e-15 * (1.0 + z.abs()) {
                    break;
                }
            }
            nodes[i] = z;
            nodes[n - 1 - i] = -z;
            weights[i] = 2.0 / (pp * pp);
            weights[n - 1 - i] = weights[i];
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| w * f(z))
            .sum()
    }
}

/// 8-point Gauss–Legendre nodes/weights on [−1, 1].
const GL8_NODES: [f64; 8] = [
    -0.960_289_856_497_536_2,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329_0,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
const GL8_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362_0,
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Composite Gauss–Legendre rule: `panels` panels of GL-8 over [a, b].
///
/// Used where the integrand oscillates too fast for a global rule, e.g.
/// convolving a discrete trajectory with the Gaussian kernel.
pub fn composite_gl8(a: f64, b: f64, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        let half = 0.5 * h;
        for (z, w) in GL8_NODES.iter().zip(GL8_WEIGHTS) {
            acc += w * half * f(mid + half * z);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_sqrt_pi() {
        for n in [4, 16, 32, 48] {
            let q = GaussHermite::new(n);
            let s: f64 = q.weights().iter().sum();
            assert!((s - PI.sqrt()).abs() < 1e-13, "n={n}: {s}");
        }
    }

    #[test]
    fn second_moment_is_half_sqrt_pi() {
        let q = GaussHermite::new(32);
        let s = q.integrate(|z| z * z);
        assert!((s - 0.5 * PI.sqrt()).abs() < 1e-13, "{s}");
    }

    #[test]
    fn polynomial_exactness_high_degree() {
        let q = GaussHermite::new(8);
        // ∫ e^{-z²} z^10 dz = (9!!/2^5)·√π = 945/32·√π
        let s = q.integrate(|z| z.powi(10));
        let exact = 945.0 / 32.0 * PI.sqrt();
        assert!((s - exact).abs() < 1e-11 * exact, "{s} vs {exact}");
    }

    #[test]
    fn gaussian_characteristic_function() {
        // ∫ e^{-z²} cos(b z) dz = √π e^{-b²/4}
        let q = GaussHermite::new(32);
        for b in [0.5, 2.0, 5.0] {
            let s = q.integrate(|z| (b * z).cos());
            let exact = PI.sqrt() * (-b * b / 4.0).exp();
            assert!((s - exact).abs() < 1e-13, "b={b}: {s} vs {exact}");
        }
    }

    #[test]
    fn odd_rule_has_zero_center_node() {
        let q = GaussHermite::new(31);
        assert_eq!(q.nodes()[15], 0.0);
    }

    #[test]
    fn composite_gl8_integrates_oscillation() {
        // ∫₀¹ sin(99πx) dx = (1 - cos(99π))/(99π) = 2/(99π)
        let exact = 2.0 / (99.0 * PI);
        let coarse = composite_gl8(0.0, 1.0, 40, |x| (99.0 * PI * x).sin());
        assert!((coarse - exact).abs() < 1e-9, "{coarse} vs {exact}");
        let fine = composite_gl8(0.0, 1.0, 80, |x| (99.0 * PI * x).sin());
        assert!((fine - exact).abs() < 1e-13, "{fine} vs {exact}");
    }
}
