//! The user-facing surfaces: CLI dispatch, config files, CSV artifacts and
//! byte-level determinism.

use std::io::Write;

use les::cli::run_cli;

fn args(list: &[&str]) -> Vec<String> {
    std::iter::once("les".to_string())
        .chain(list.iter().map(|s| s.to_string()))
        .collect()
}

#[test]
fn verify_filter_via_cli_writes_report_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let code = run_cli(args(&["verify-filter", "--out", dir.path().to_str().unwrap()]));
    assert_eq!(code, 0);
    let report = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("ALL PASSED"), "{report}");
}

#[test]
fn bad_arguments_exit_nonzero() {
    assert_ne!(run_cli(args(&["no-such-subcommand"])), 0);
}

#[test]
fn config_file_drives_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("exp.cfg");
    let mut f = std::fs::File::create(&cfg_path).unwrap();
    // A cheap analytic comparison on a single coarse grid.
    writeln!(
        f,
        "kind = analytic-compare\npreset = set3\n[experiment]\ngrids = 0.1\n[solver]\nt_end = 0.5\nsnapshot_times = 0.5"
    )
    .unwrap();
    // snapshot_times belongs to [experiment]; move it there instead.
    drop(f);
    let bad = run_cli(args(&[
        "analytic-compare",
        "--config",
        cfg_path.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]));
    // `snapshot_times` under [solver] must be rejected as an unknown key.
    assert_eq!(bad, 2);

    let mut f = std::fs::File::create(&cfg_path).unwrap();
    writeln!(
        f,
        "kind = analytic-compare\npreset = set3\nsnapshot_times = 0.5\ngrids = 0.1\n[solver]\nt_end = 0.5"
    )
    .unwrap();
    drop(f);
    let out = dir.path().join("out");
    let code = run_cli(args(&[
        "analytic-compare",
        "--config",
        cfg_path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]));
    assert_eq!(code, 0);
    assert!(out.join("snapshots_dx0.1000.csv").exists());
    assert!(out.join("errors.csv").exists());
    assert!(out.join("report.txt").exists());
    let csv = std::fs::read_to_string(out.join("snapshots_dx0.1000.csv")).unwrap();
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(
        header,
        "t,x,u_exact,u_exact_filtered,u_plain,u_filtered_model"
    );
    // Provenance block echoes the physical parameters.
    assert!(csv.lines().any(|l| l.starts_with("# lambda = 500")), "{csv}");
}

#[test]
fn identical_config_and_seed_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("exp.cfg");
    std::fs::write(
        &cfg_path,
        "kind = analytic-compare\npreset = set3\ngrids = 0.1, 0.05\nsnapshot_times = 1.0\n",
    )
    .unwrap();
    let (out1, out2) = (dir.path().join("o1"), dir.path().join("o2"));
    for out in [&out1, &out2] {
        let code = run_cli(args(&[
            "analytic-compare",
            "--config",
            cfg_path.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--seed",
            "7",
        ]));
        assert_eq!(code, 0);
    }
    for name in ["snapshots_dx0.1000.csv", "snapshots_dx0.0500.csv", "errors.csv", "report.txt"] {
        let a = std::fs::read(out1.join(name)).unwrap();
        let b = std::fs::read(out2.join(name)).unwrap();
        assert_eq!(a, b, "artifact {name} differs between identical runs");
    }
}

#[test]
fn zero_horizon_run_emits_only_initial_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("exp.cfg");
    std::fs::write(
        &cfg_path,
        "kind = analytic-compare\npreset = set2\ngrids = 0.1\nsnapshot_times = 0.0\n[solver]\nt_end = 0.0\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let code = run_cli(args(&[
        "analytic-compare",
        "--config",
        cfg_path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]));
    assert_eq!(code, 0);
    // Errors against the references are interpolation-level only.
    let errors = std::fs::read_to_string(out.join("errors.csv")).unwrap();
    let data: Vec<&str> = errors.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(data.len(), 2);
    for line in data {
        let l2: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(l2 < 1e-12, "expected near-zero initial error, got {l2}");
    }
}
