//! Property tests for the filter and closure invariants.

use proptest::prelude::*;

use les::closures::{closure_terms_1d, ModelParams, VelocityJet1};
use les::filter::{
    gaussian_kernel, kernel_normalization_error, FilterOracle, FilterSpec, GaussHermite, ModeSum,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The kernel integrates to one for any admissible shape, 1D and 3D.
    #[test]
    fn kernel_normalizes(
        eta in 0.02f64..0.3,
        gamma_t in 1.0f64..12.0,
        gamma_l in 1.0f64..12.0,
        dim in prop_oneof![Just(1usize), Just(3usize)],
    ) {
        let spec = FilterSpec::new(eta, gamma_t, gamma_l, dim).unwrap();
        let quad = GaussHermite::new(32);
        prop_assert!(kernel_normalization_error(&spec, &quad) < 1e-12);
    }

    /// Evenness G(s, y) = G(−s, −y).
    #[test]
    fn kernel_is_even(
        eta in 0.02f64..0.3,
        s in -0.5f64..0.5,
        y in -0.5f64..0.5,
    ) {
        let spec = FilterSpec::one_d(eta, 6.0, 6.0).unwrap();
        prop_assert_eq!(gaussian_kernel(s, &[y], &spec), gaussian_kernel(-s, &[-y], &spec));
    }

    /// Filtering is linear in the field.
    #[test]
    fn filter_is_linear(
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
        x in 0.0f64..1.0,
    ) {
        let spec = FilterSpec::one_d(0.08, 6.0, 6.0).unwrap();
        let oracle = FilterOracle::new(spec, 24);
        let f = ModeSum::sin_x(1.0, 2.0 * std::f64::consts::PI, 0.1);
        let g = ModeSum::poly_x(vec![0.3, -1.0, 0.5]);
        let combo = ModeSum::new(1)
            .with_term(a, les::filter::Factor::One, vec![les::filter::Factor::Sin {
                omega: 2.0 * std::f64::consts::PI,
                phase: 0.1,
            }])
            .with_term(b, les::filter::Factor::One, vec![les::filter::Factor::Poly(vec![
                0.3, -1.0, 0.5,
            ])]);
        let lhs = oracle.filter(&combo, 0.0, &[x]).unwrap();
        let rhs = a * oracle.filter(&f, 0.0, &[x]).unwrap()
            + b * oracle.filter(&g, 0.0, &[x]).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    /// Sign and bound invariants of the 1D closure terms for any jet.
    #[test]
    fn closure_point_invariants(
        u_t in -5.0f64..5.0,
        u_x in -5.0f64..5.0,
        u_xx in -20.0f64..20.0,
        u_tx in -20.0f64..20.0,
        lambda in 0.0f64..10.0,
        eta in 0.01f64..0.2,
    ) {
        let p = ModelParams::new(0.7, lambda, 0.5, 1.0).unwrap();
        let spec = FilterSpec::one_d(eta, 6.0, 6.0).unwrap();
        let jet = VelocityJet1 { u_t, u_x, u_xx, u_tx };
        let pt = closure_terms_1d(&jet, &p, &spec);
        prop_assert!(pt.tau >= 0.0);
        prop_assert!(pt.k4 >= 1.0);
        prop_assert!(pt.k5 >= 0.0);
        // Newtonian limit collapses the flux.
        if lambda == 0.0 {
            prop_assert_eq!(pt.s, p.nu * u_x);
        }
    }
}
