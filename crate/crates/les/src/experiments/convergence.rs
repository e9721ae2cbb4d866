//! Scheme-order study on the smooth analytic regime, plus validation of the
//! analytic benchmark itself (exact-solution residual, partials, sign of φ).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use crate::analytic::{analytic_u, analytic_u_derivs, preset, validate_phi_nonvanishing, PresetId};
use crate::closures::ModelParams;
use crate::error::Result;
use crate::fields::{error_norm, fit_loglog_slope, NormKind, ScalarField1};
use crate::solver::{run, ModelKind, SolverConfig};

use super::config::ExperimentConfig;
use super::report::{write_csv, RunReport};

pub fn experiment_convergence(cfg: &ExperimentConfig) -> Result<RunReport> {
    let mut report = RunReport::new("convergence and benchmark validation", cfg.provenance());
    let spec = cfg.analytic_spec();
    let t_end = cfg.convergence_t_end;

    // Exact-solution residual for all three constant sets.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for id in [PresetId::Set1, PresetId::Set2, PresetId::Set3] {
        let p = preset(id);
        let mut worst: f64 = 0.0;
        for _ in 0..10_000 {
            let t = rng.gen_range(0.0..1.0);
            let x = rng.gen_range(0.0..1.0);
            let d = analytic_u_derivs(t, x, &p.spec)?;
            let res = d.u_t + d.u * d.u_x - p.spec.nu * d.u_xx;
            worst = worst.max(res.abs() / (1.0 + d.u_t.abs()));
        }
        report.assert_row(
            format!("exact_solution_residual_{id}"),
            worst <= 1e-9,
            Some(worst),
            "max relative Burgers residual at 10000 random probes (want <= 1e-9)",
            vec![],
        );
        let sign_ok = validate_phi_nonvanishing(&p.spec, (0.0, 1.0), (0.0, 1.0), 1000).is_ok();
        report.assert_row(
            format!("phi_sign_definite_{id}"),
            sign_ok,
            None,
            "phi keeps one sign on the unit space-time box (10^6 samples)",
            vec![],
        );
    }

    // Exact partials against central finite differences of u itself.
    {
        let p = cfg.analytic_spec();
        let mut pairs = Vec::new();
        for &h in &[1e-3, 5e-4, 2.5e-4] {
            let mut worst: f64 = 0.0;
            for &(t, x) in &[(0.3, 0.41), (0.7, 0.12), (0.9, 0.83)] {
                let d = analytic_u_derivs(t, x, &p)?;
                let fd = (analytic_u(t, x + h, &p)? - analytic_u(t, x - h, &p)?) / (2.0 * h);
                worst = worst.max((d.u_x - fd).abs());
            }
            pairs.push((h, worst));
        }
        let slope = fit_loglog_slope(&pairs);
        report.assert_row(
            "exact_partials_cross_check",
            (1.9..=2.1).contains(&slope),
            Some(slope),
            "central differences of u converge to the closed-form u_x at order 2",
            pairs,
        );
    }

    // MacCormack order on the smooth regime.
    let mut pairs = Vec::new();
    for &dx in &cfg.convergence_grids {
        let mut sc = SolverConfig::base(
            ModelKind::Plain,
            ModelParams::new(spec.nu, 0.0, 0.5, cfg.rho0)?,
        );
        sc.domain = cfg.domain;
        sc.dx = dx;
        sc.dt = dx * cfg.dt_ratio;
        sc.t_end = t_end;
        sc.analytic = Some(spec.clone());
        sc.advection = cfg.advection;
        let traj = run(&sc)?;
        let (_, u_end) = traj.last();
        let grid = Arc::clone(u_end.grid());
        let mut exact = ScalarField1::zeros(Arc::clone(&grid));
        for i in 0..grid.n_total() {
            let x = grid.coord(grid.unflatten(i))[0];
            exact.values_mut()[i] = analytic_u(t_end, x, &spec)?;
        }
        let err = error_norm(u_end, &exact, NormKind::L2)?;
        pairs.push((dx, err));
    }
    let slope = fit_loglog_slope(&pairs);
    report.assert_row(
        "maccormack_order",
        (1.8..=2.2).contains(&slope),
        Some(slope),
        format!("fitted L2-error order at t={t_end} on the smooth regime (want within [1.8, 2.2])"),
        pairs.clone(),
    );

    write_csv(
        &cfg.out_dir.join("errors.csv"),
        &cfg.provenance(),
        &["dx", "l2"],
        pairs.into_iter().map(|(dx, e)| vec![dx, e]),
    )?;

    Ok(report)
}
