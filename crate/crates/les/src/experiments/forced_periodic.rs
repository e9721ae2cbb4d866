//! Forced periodic benchmark: constant initial state, periodic forcing with
//! fast modes, coarse plain runs against a fine reference, and the filtered
//! model on the coarsest grid.
//!
//! Errors are measured at the profile time against the fine reference — raw
//! for plain runs, convolved with the run's filter for the filtered run.

use std::sync::Arc;

use crate::closures::ModelParams;
use crate::error::{LesError, Result};
use crate::fields::{error_norm, NormKind, ScalarField1};
use crate::filter::FilterSpec;
use crate::solver::{run, BcMode, InitialCondition, ModelKind, SolverConfig, Trajectory};

use super::config::ExperimentConfig;
use super::report::{write_csv, RunReport};
use super::sampler::TrajectorySampler;

fn forced_config(cfg: &ExperimentConfig, dx: f64, t_end: f64) -> SolverConfig {
    let mut sc = SolverConfig::base(
        ModelKind::Plain,
        ModelParams::new(cfg.forced_nu, 0.0, 0.5, cfg.rho0).expect("valid params"),
    );
    sc.domain = cfg.domain;
    sc.dx = dx;
    sc.dt = dx * cfg.dt_ratio;
    sc.t_end = t_end;
    sc.bc = BcMode::Periodic;
    sc.initial = InitialCondition::Constant(cfg.u0);
    sc.forcing = Some(cfg.forcing.clone());
    sc.advection = cfg.advection;
    sc.cfl_warn_threshold = cfg.cfl_warn;
    sc.snapshot_stride = 1;
    sc
}

fn eta_forced(cfg: &ExperimentConfig) -> f64 {
    cfg.eta.unwrap_or(0.1)
}

pub fn experiment_forced_periodic(cfg: &ExperimentConfig) -> Result<RunReport> {
    let mut report = RunReport::new("forced periodic comparison", cfg.provenance());
    let filter = FilterSpec::one_d(eta_forced(cfg), cfg.gamma_t, cfg.gamma_l)?;

    // Fine reference; extended past the profile time to cover the temporal
    // support of the filter kernel.
    let t_margin = 7.5 * 2.0 * filter.eta / cfg.gamma_t.sqrt();
    let mut fine_cfg = forced_config(cfg, cfg.fine_dx, 0.0);
    let fine_t_end = {
        let want = (cfg.t_end).max(cfg.profile_time + t_margin);
        (want / fine_cfg.dt).ceil() * fine_cfg.dt
    };
    fine_cfg.t_end = fine_t_end;
    fine_cfg.snapshot_stride = 2;
    let fine_traj = run(&fine_cfg)?;
    let sampler = TrajectorySampler::from_trajectory(&fine_traj, true)?;

    // Sampling the reference at its own nodes must be exact.
    let self_err = {
        let (tk, uk) = fine_traj.at_time(cfg.profile_time);
        let grid = uk.grid();
        let mut worst: f64 = 0.0;
        for i in 0..grid.n_total() - 1 {
            let x = grid.coord(grid.unflatten(i))[0];
            worst = worst.max((sampler.sample(*tk, x) - uk.values()[i]).abs());
        }
        worst
    };
    report.assert_row(
        "fine_reference_self_error",
        self_err == 0.0,
        Some(self_err),
        "sampling the fine reference at its own nodes (want exactly 0)",
        vec![],
    );

    // Coarse plain runs.
    let mut plain_runs: Vec<(f64, Trajectory, f64)> = Vec::new();
    for &dx in &cfg.plain_grids {
        let sc = forced_config(cfg, dx, cfg.t_end);
        match run(&sc) {
            Ok(traj) => {
                let (_, u) = traj.at_time(cfg.profile_time);
                let grid = Arc::clone(u.grid());
                let mut reference = ScalarField1::zeros(Arc::clone(&grid));
                for i in 0..grid.n_total() {
                    let x = grid.coord(grid.unflatten(i))[0];
                    reference.values_mut()[i] = sampler.sample(cfg.profile_time, x);
                }
                let err = error_norm(u, &reference, NormKind::L2)?;
                plain_runs.push((dx, traj, err));
            }
            Err(LesError::BlowUp { step, time, .. }) => {
                report.info_row(
                    format!("plain_dx{dx:.4}_blowup"),
                    None,
                    format!("plain run blew up at step {step} (t={time:.3})"),
                    vec![],
                );
            }
            Err(e) => return Err(e),
        }
    }

    // Filtered model on the coarsest grid.
    let mut filt_cfg = forced_config(cfg, cfg.dx, cfg.t_end);
    filt_cfg.model = ModelKind::Filtered;
    filt_cfg.params = ModelParams::new(cfg.forced_nu, cfg.forced_lambda, 0.5, cfg.rho0)?;
    filt_cfg.filter = Some(filter.clone());
    filt_cfg.forcing_filter = cfg.forcing_filter;
    let filt_traj = run(&filt_cfg)?;
    let filt_err = {
        let (_, u) = filt_traj.at_time(cfg.profile_time);
        let grid = Arc::clone(u.grid());
        let mut reference = ScalarField1::zeros(Arc::clone(&grid));
        for i in 0..grid.n_total() {
            let x = grid.coord(grid.unflatten(i))[0];
            reference.values_mut()[i] = sampler.filtered(&filter, cfg.profile_time, x);
        }
        error_norm(u, &reference, NormKind::L2)?
    };

    // Time series at the probe point.
    let probe_x = cfg.timeseries_x;
    let coarse_dt = cfg.dx * cfg.dt_ratio;
    let n_times = (cfg.t_end / coarse_dt).round() as usize + 1;
    let mut ts_rows = Vec::new();
    for k in 0..n_times {
        let t = k as f64 * coarse_dt;
        let mut row = vec![t];
        for (_, traj, _) in &plain_runs {
            let (_, u) = traj.at_time(t);
            let grid = u.grid();
            let j = ((probe_x - grid.origin()[0]) / grid.dx(0)).round() as usize;
            row.push(u.values()[j]);
        }
        {
            let (_, u) = filt_traj.at_time(t);
            let grid = u.grid();
            let j = ((probe_x - grid.origin()[0]) / grid.dx(0)).round() as usize;
            row.push(u.values()[j]);
        }
        row.push(sampler.sample(t, probe_x));
        row.push(sampler.filtered(&filter, t, probe_x));
        ts_rows.push(row);
    }
    let mut ts_cols: Vec<String> = vec!["t".into()];
    for (dx, _, _) in &plain_runs {
        ts_cols.push(format!("u_plain_dx{dx:.4}"));
    }
    ts_cols.push(format!("u_filtered_dx{:.4}", cfg.dx));
    ts_cols.push("u_fine".into());
    ts_cols.push("u_fine_filtered".into());
    write_csv(
        &cfg.out_dir.join(format!("timeseries_x{probe_x}.csv")),
        &cfg.provenance(),
        &ts_cols.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
        ts_rows,
    )?;

    // Spatial profiles at the comparison time, one file per run.
    for (dx, traj, _) in &plain_runs {
        let (_, u) = traj.at_time(cfg.profile_time);
        let grid = u.grid();
        let rows: Vec<Vec<f64>> = (0..grid.n_total())
            .map(|i| {
                let x = grid.coord(grid.unflatten(i))[0];
                vec![cfg.profile_time, x, u.values()[i], sampler.sample(cfg.profile_time, x)]
            })
            .collect();
        write_csv(
            &cfg.out_dir.join(format!("snapshots_plain_dx{dx:.4}.csv")),
            &cfg.provenance(),
            &["t", "x", "u", "u_fine"],
            rows,
        )?;
    }
    {
        let (_, u) = filt_traj.at_time(cfg.profile_time);
        let grid = u.grid();
        let rows: Vec<Vec<f64>> = (0..grid.n_total())
            .map(|i| {
                let x = grid.coord(grid.unflatten(i))[0];
                vec![
                    cfg.profile_time,
                    x,
                    u.values()[i],
                    sampler.filtered(&filter, cfg.profile_time, x),
                ]
            })
            .collect();
        write_csv(
            &cfg.out_dir.join(format!("snapshots_filtered_dx{:.4}.csv", cfg.dx)),
            &cfg.provenance(),
            &["t", "x", "u", "u_fine_filtered"],
            rows,
        )?;
    }

    // Error table and orderings.
    let mut err_rows = Vec::new();
    for (dx, _, err) in &plain_runs {
        err_rows.push(vec![*dx, 0.0, *err]);
        report.info_row(
            format!("plain_dx{dx:.4}_l2"),
            Some(*err),
            "plain-model L2 error vs fine reference at the profile time",
            vec![],
        );
    }
    err_rows.push(vec![cfg.dx, 1.0, filt_err]);
    report.info_row(
        format!("filtered_dx{:.4}_l2", cfg.dx),
        Some(filt_err),
        "filtered-model L2 error vs filtered fine reference at the profile time",
        vec![],
    );
    write_csv(
        &cfg.out_dir.join("errors.csv"),
        &cfg.provenance(),
        &["dx", "is_filtered", "l2"],
        err_rows,
    )?;

    if let Some((dx0, _, e0)) = plain_runs.iter().find(|(dx, _, _)| (*dx - cfg.dx).abs() < 1e-12) {
        report.assert_row(
            "filtered_beats_plain_same_grid",
            filt_err < *e0,
            Some(filt_err / e0),
            format!("filtered {filt_err:.4e} vs plain {e0:.4e} at dx={dx0} (want ratio < 1)"),
            vec![],
        );
    }
    if let Some((dxf, _, ef)) = plain_runs
        .iter()
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
    {
        report.assert_row(
            "filtered_beats_plain_finest",
            filt_err < *ef,
            Some(filt_err / ef),
            format!(
                "filtered at dx={} {filt_err:.4e} vs plain at dx={dxf} {ef:.4e} (want ratio < 1)",
                cfg.dx
            ),
            vec![],
        );
    }

    Ok(report)
}
