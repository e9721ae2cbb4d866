//! Closure-term verification: 1D and 3D gradient closures against the
//! brute-force filtered fluxes, limit consistency, signs and symmetry.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::closures::{
    closure_1d_closed_form, closure_3d_closed_form, closure_terms_1d, closure_terms_3d,
    jet_from_smooth_fields, KhatScaling, ModelParams, VelocityJet1,
};
use crate::error::Result;
use crate::fields::{fit_loglog_slope, Grid, NormKind, ScalarField, SymTensor3, SYM_PAIRS};
use crate::filter::{
    Factor, FilterOracle, FilterSpec, FnField, GaussHermite, ModeSum, SmoothField, TaylorFiltered,
};
use crate::solver::{rhs_generalized, rhs_plain, AdvectionForm};
use crate::fields::BoundaryMode;

use super::config::ExperimentConfig;
use super::report::RunReport;

const ETAS: [f64; 4] = [0.1, 0.05, 0.025, 0.0125];

/// Strain rate of three closed-form components at a point.
fn d_tensor(u: &[&dyn SmoothField; 3], t: f64, x: &[f64; 3]) -> SymTensor3 {
    let mut g = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut o = [0usize; 3];
            o[j] = 1;
            g[i][j] = u[i].partial(0, &o, t, x);
        }
    }
    let mut d = SymTensor3::default();
    for (i, j) in SYM_PAIRS {
        d.set(i, j, 0.5 * (g[i][j] + g[j][i]));
    }
    d
}

/// One 4-axis Gauss–Hermite sweep: filtered velocities, filtered products,
/// and the filtered nonlinear flux, all accumulated in a single pass.
struct Brute3 {
    ubar: [f64; 3],
    uu: [f64; 6],
    s: [f64; 6],
}

fn brute_sweep_3d(
    u: &[&dyn SmoothField; 3],
    p: &ModelParams,
    spec: &FilterSpec,
    quad: &GaussHermite,
    t: f64,
    x: &[f64; 3],
) -> Brute3 {
    let (zs, ws) = (quad.nodes(), quad.weights());
    let ct = 2.0 * spec.eta / spec.gamma_t.sqrt();
    let cl = 2.0 * spec.eta / spec.gamma_l.sqrt();
    let l2 = p.lambda * p.lambda;
    let mut ubar = [0.0; 3];
    let mut uu = [0.0; 6];
    let mut s = [0.0; 6];
    for (za, wa) in zs.iter().zip(ws) {
        let ts = t + ct * za;
        for (zb, wb) in zs.iter().zip(ws) {
            for (zc, wc) in zs.iter().zip(ws) {
                let w3 = wa * wb * wc;
                for (zd, wd) in zs.iter().zip(ws) {
                    let y = [x[0] + cl * zb, x[1] + cl * zc, x[2] + cl * zd];
                    let w = w3 * wd;
                    let uv = [u[0].value(ts, &y), u[1].value(ts, &y), u[2].value(ts, &y)];
                    let d = d_tensor(u, ts, &y);
                    let mu = (1.0 + l2 * d.frobenius_sq()).sqrt();
                    for (c, (i, j)) in SYM_PAIRS.iter().enumerate() {
                        uu[c] += w * uv[*i] * uv[*j];
                        s[c] += w * 2.0 * p.nu * mu * d.get(*i, *j);
                    }
                    for c in 0..3 {
                        ubar[c] += w * uv[c];
                    }
                }
            }
        }
    }
    let norm = PI * PI;
    for v in ubar.iter_mut() {
        *v /= norm;
    }
    for v in uu.iter_mut() {
        *v /= norm;
    }
    for v in s.iter_mut() {
        *v /= norm;
    }
    Brute3 { ubar, uu, s }
}

pub fn verify_closures_suite(cfg: &ExperimentConfig) -> Result<RunReport> {
    let mut report = RunReport::new("closure terms", cfg.provenance());

    // ---- 1D closures against the 2-axis quadrature oracle ----
    let lambda = 1.0;
    let p1 = ModelParams::new(1.0, lambda, 0.5, 1.0)?;
    // u(t,x) = sin(2πx)(1 + 0.3 sin(1.3 t)) exercises both filter channels.
    let u1 = ModeSum::new(1)
        .with_term(1.0, Factor::One, vec![Factor::Sin { omega: 2.0 * PI, phase: 0.0 }])
        .with_term(
            0.3,
            Factor::Sin { omega: 1.3, phase: 0.0 },
            vec![Factor::Sin { omega: 2.0 * PI, phase: 0.0 }],
        );
    let u1_sq = FnField::new(1, |t, x: &[f64]| {
        let v = u1.value(t, x);
        v * v
    });
    let flux1 = FnField::new(1, |t, x: &[f64]| {
        let w = u1.partial(0, &[1], t, x);
        (1.0 + lambda * lambda * w * w).sqrt() * w
    });
    let probes_1d = [(0.0, 0.07), (0.2, 0.31), (0.55, 0.62), (0.8, 0.93)];
    let mut tau_pairs = Vec::new();
    let mut s_pairs = Vec::new();
    for &eta in &ETAS {
        let spec = FilterSpec::one_d(eta, cfg.gamma_t, cfg.gamma_l)?;
        let oracle = FilterOracle::new(spec.clone(), cfg.quad_nodes);
        let ubar = TaylorFiltered::new(&u1, &spec);
        let mut tau_worst: f64 = 0.0;
        let mut s_worst: f64 = 0.0;
        for &(t, x) in &probes_1d {
            let pt = closure_1d_closed_form(&ubar, &p1, &spec, t, x)?;
            let um = oracle.filter(&u1, t, &[x])?;
            let tau_brute = 0.5 * (oracle.filter(&u1_sq, t, &[x])? - um * um);
            tau_worst = tau_worst.max((pt.tau - tau_brute).abs());
            let s_brute = p1.nu * oracle.filter(&flux1, t, &[x])?;
            s_worst = s_worst.max((pt.s - s_brute).abs());
        }
        tau_pairs.push((eta, tau_worst));
        s_pairs.push((eta, s_worst));
    }
    let tau_slope = fit_loglog_slope(&tau_pairs);
    report.assert_row(
        "tau1d_residual_order",
        tau_slope >= 3.5,
        Some(tau_slope),
        "subgrid energy vs brute-force filtered u^2 (want >= 3.5)",
        tau_pairs,
    );
    let s_slope = fit_loglog_slope(&s_pairs);
    report.assert_row(
        "flux1d_residual_order",
        s_slope >= 3.5,
        Some(s_slope),
        "closure flux vs brute-force filtered nonlinear flux (want >= 3.5)",
        s_pairs,
    );

    // ---- 3D closures against the 4-axis quadrature oracle ----
    // ν deliberately far from 1 so the two K̂ scalings differ.
    let p3 = ModelParams::new(0.37, 0.5, 0.5, 1.0)?;
    let comp = |axis: usize| {
        let mut space = vec![Factor::One, Factor::One, Factor::One];
        space[axis] = Factor::Sin { omega: 2.0 * PI, phase: 0.0 };
        ModeSum::new(3).with_term(1.0, Factor::One, space)
    };
    let (u3a, u3b, u3c) = (comp(2), comp(0), comp(1));
    let u3: [&dyn SmoothField; 3] = [&u3a, &u3b, &u3c];
    let probes_3d: [[f64; 3]; 5] = [
        [0.15, 0.3, 0.7],
        [0.5, 0.21, 0.11],
        [0.81, 0.65, 0.4],
        [0.33, 0.9, 0.58],
        [0.05, 0.45, 0.92],
    ];
    let quad3 = GaussHermite::new(cfg.quad_nodes_3d);
    let mut tau3_pairs = Vec::new();
    let mut s3_pairs = Vec::new();
    let mut s3_alt_pairs = Vec::new();
    for &eta in &ETAS {
        let spec = FilterSpec::three_d(eta, cfg.gamma_t, cfg.gamma_l)?;
        let wa = TaylorFiltered::new(&u3a, &spec);
        let wb = TaylorFiltered::new(&u3b, &spec);
        let wc = TaylorFiltered::new(&u3c, &spec);
        let wrapped: [&dyn SmoothField; 3] = [&wa, &wb, &wc];
        let mut tau_worst: f64 = 0.0;
        let mut s_worst: f64 = 0.0;
        let mut alt_worst: f64 = 0.0;
        for x in &probes_3d {
            let brute = brute_sweep_3d(&u3, &p3, &spec, &quad3, 0.0, x);
            let pt = closure_3d_closed_form(&wrapped, &p3, &spec, KhatScaling::WithViscosity, 0.0, x)?;
            let alt =
                closure_3d_closed_form(&wrapped, &p3, &spec, KhatScaling::WithoutViscosity, 0.0, x)?;
            for (c, (i, j)) in SYM_PAIRS.iter().enumerate() {
                let tau_brute = brute.uu[c] - brute.ubar[*i] * brute.ubar[*j];
                tau_worst = tau_worst.max((pt.tau.get(*i, *j) - tau_brute).abs());
                s_worst = s_worst.max((pt.s.get(*i, *j) - brute.s[c]).abs());
                alt_worst = alt_worst.max((alt.s.get(*i, *j) - brute.s[c]).abs());
            }
        }
        tau3_pairs.push((eta, tau_worst));
        s3_pairs.push((eta, s_worst));
        s3_alt_pairs.push((eta, alt_worst));
    }
    let tau3_slope = fit_loglog_slope(&tau3_pairs);
    report.assert_row(
        "tau3d_residual_order",
        tau3_slope >= 3.5,
        Some(tau3_slope),
        "subgrid tensor vs 4-axis brute force at 5 probes (want >= 3.5)",
        tau3_pairs,
    );
    let s3_slope = fit_loglog_slope(&s3_pairs);
    report.assert_row(
        "flux3d_residual_order",
        s3_slope >= 3.5,
        Some(s3_slope),
        "closure flux (viscosity on cross term) vs 4-axis brute force (want >= 3.5)",
        s3_pairs,
    );
    let alt_slope = fit_loglog_slope(&s3_alt_pairs);
    report.info_row(
        "flux3d_crossterm_without_viscosity",
        Some(alt_slope),
        "measured order when the cross term omits the viscosity factor",
        s3_alt_pairs,
    );

    // ---- Limit consistency ----
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let g = Arc::new(Grid::line(0.0, 1.0, 41, 0.001)?);
    let mut worst_gap: f64 = 0.0;
    let p_newton = ModelParams::new(0.31, 0.0, 0.5, 1.0)?;
    for _ in 0..20 {
        let a: f64 = rng.gen_range(-1.0..1.0);
        let b: f64 = rng.gen_range(-1.0..1.0);
        let k = rng.gen_range(1..5) as f64;
        let u = ScalarField::from_fn(Arc::clone(&g), |x| {
            a * (2.0 * PI * k * x[0]).sin() + b * (2.0 * PI * x[0]).cos()
        });
        for bc in [BoundaryMode::Periodic, BoundaryMode::OneSided] {
            let r1 = rhs_plain(&u, p_newton.nu, None, 0.0, bc, AdvectionForm::Conservative)?;
            let r2 = rhs_generalized(&u, &p_newton, None, 0.0, bc, AdvectionForm::Conservative)?;
            let gap = crate::fields::error_norm(&r1, &r2, NormKind::LInf)?;
            worst_gap = worst_gap.max(gap);
        }
    }
    report.assert_row(
        "limit_lambda0_exact",
        worst_gap == 0.0,
        Some(worst_gap),
        "generalized model at lambda = 0 vs plain model on random states (want exactly 0)",
        vec![],
    );

    let mut eta_pairs = Vec::new();
    {
        use crate::fields::FieldHistory1;
        use crate::solver::{rhs_filtered, ForcingFilterMode};
        let p = ModelParams::new(0.4, 1.5, 0.5, 1.0)?;
        let shape =
            |x: f64| (2.0 * PI * x).sin() + 0.4 * (4.0 * PI * x).cos();
        let u = ScalarField::from_fn(Arc::clone(&g), |x| shape(x[0]));
        let prev = ScalarField::from_fn(Arc::clone(&g), |x| 0.98 * shape(x[0]));
        let mut h = FieldHistory1::new(3)?;
        h.push(0.0, prev)?;
        h.push(0.001, u.clone())?;
        let r_gen =
            rhs_generalized(&u, &p, None, 0.001, BoundaryMode::Periodic, AdvectionForm::Conservative)?;
        for k in 0..4 {
            let eta = 0.1 / 2f64.powi(k);
            let spec = FilterSpec::one_d(eta, cfg.gamma_t, cfg.gamma_l)?;
            let r_f = rhs_filtered(
                &h,
                &p,
                &spec,
                None,
                ForcingFilterMode::ExactGaussian,
                0.001,
                BoundaryMode::Periodic,
                AdvectionForm::Conservative,
            )?;
            let gap = crate::fields::error_norm(&r_f, &r_gen, NormKind::LInf)?;
            eta_pairs.push((eta, gap));
        }
    }
    let eta_slope = fit_loglog_slope(&eta_pairs);
    report.assert_row(
        "limit_eta_to_zero_order",
        eta_slope >= 1.9,
        Some(eta_slope),
        "filtered RHS approaches the generalized RHS (want order >= 1.9)",
        eta_pairs,
    );

    // ---- Signs and symmetry on random trigonometric fields ----
    let spec1 = FilterSpec::one_d(0.1, cfg.gamma_t, cfg.gamma_l)?;
    let spec3 = FilterSpec::three_d(0.1, cfg.gamma_t, cfg.gamma_l)?;
    let p_rand = ModelParams::new(0.8, 1.3, 0.5, 1.0)?;
    let mut sign_ok = true;
    for _ in 0..1000 {
        // Random 1D jet from a random trigonometric field at a random point.
        let amp: f64 = rng.gen_range(0.1..2.0);
        let om: f64 = rng.gen_range(1.0..20.0);
        let ph: f64 = rng.gen_range(0.0..6.28);
        let omt: f64 = rng.gen_range(0.5..4.0);
        let f = ModeSum::new(1).with_term(
            amp,
            Factor::Sin { omega: omt, phase: ph },
            vec![Factor::Sin { omega: om, phase: ph * 0.7 }],
        );
        let (t, x) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        let jet = VelocityJet1 {
            u_t: f.partial(1, &[0], t, &[x]),
            u_x: f.partial(0, &[1], t, &[x]),
            u_xx: f.partial(0, &[2], t, &[x]),
            u_tx: f.partial(1, &[1], t, &[x]),
        };
        let pt = closure_terms_1d(&jet, &p_rand, &spec1);
        sign_ok &= pt.tau >= 0.0 && pt.k4 >= 1.0 && pt.k5 >= 0.0;
    }
    report.assert_row(
        "sign_invariants_1d",
        sign_ok,
        None,
        "tau >= 0, K4 >= 1, K5 >= 0 over 1000 random trigonometric fields",
        vec![],
    );

    let mut sign3_ok = true;
    let mut sym_ok = true;
    for _ in 0..1000 {
        let mk = |rng: &mut ChaCha8Rng| {
            let amp: f64 = rng.gen_range(0.1..1.0);
            let axis = rng.gen_range(0..3usize);
            let om: f64 = rng.gen_range(1.0..12.0);
            let ph: f64 = rng.gen_range(0.0..6.28);
            let omt: f64 = rng.gen_range(0.5..3.0);
            let mut space = vec![Factor::One, Factor::One, Factor::One];
            space[axis] = Factor::Sin { omega: om, phase: ph };
            ModeSum::new(3).with_term(amp, Factor::Sin { omega: omt, phase: 0.3 }, space)
        };
        let (fa, fb, fc) = (mk(&mut rng), mk(&mut rng), mk(&mut rng));
        let fields: [&dyn SmoothField; 3] = [&fa, &fb, &fc];
        let t = rng.gen_range(0.0..1.0);
        let x = [
            rng.gen_range(0.0..1.0),
            rng.gen_range(0.0..1.0),
            rng.gen_range(0.0..1.0),
        ];
        let jet = jet_from_smooth_fields(&fields, t, &x);
        let pt = closure_terms_3d(&jet, &p_rand, &spec3, KhatScaling::WithViscosity);
        sign3_ok &= pt.k1 >= 0.0 && pt.k2 >= 0.0 && pt.k3 >= 0.0;
        for i in 0..3 {
            sign3_ok &= pt.tau.get(i, i) >= 0.0;
        }
        for (i, j) in SYM_PAIRS {
            sym_ok &= pt.tau.get(i, j) == pt.tau.get(j, i)
                && pt.s.get(i, j) == pt.s.get(j, i)
                && pt.khat.get(i, j) == pt.khat.get(j, i);
        }
    }
    report.assert_row(
        "sign_invariants_3d",
        sign3_ok,
        None,
        "K1, K2, K3 >= 0 and nonnegative tau diagonal over 1000 random fields",
        vec![],
    );
    report.assert_row(
        "symmetry_3d",
        sym_ok,
        None,
        "tau, S, and the cross tensor are exactly symmetric",
        vec![],
    );

    Ok(report)
}
