use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use asyncov::{ingest_ticks, save_ticks, IngestOptions};
use asyncov_core::simulation::{estimate_all, replication_rng};
use asyncov_core::{simulate_pair, EstimatorKind, SimConfig, TuningPolicy};

fn asyncov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asyncov")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn assert_single_error_line(out: &Output, code: &str) {
    assert!(!out.status.success());
    let err = stderr(out);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with(&format!("error[{code}]: ")), "{err}");
}

fn toy_files(dir: &Path) -> (PathBuf, PathBuf) {
    (
        write(dir, "x.csv", "time,logprice\n0,0\n1,1\n2,3\n3,4\n"),
        write(dir, "y.csv", "time,logprice\n0,0\n1,2\n2,2\n3,5\n"),
    )
}

fn csv_column(text: &str, col: &str) -> Vec<String> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == col).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn hy_on_synchronous_toy() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.csv", "0,0.0\n1,1.0\n2,3.0");
    let y = write(dir.path(), "y.csv", "0,0.0\n1,2.0\n2,2.0");
    let out = asyncov(&["estimate", "--x", x.to_str().unwrap(), "--y", y.to_str().unwrap(), "--estimators", "hy"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv_column(&text, "estimate"), ["2.0"]);
    assert_eq!(csv_column(&text, "n_sync"), ["2"]);
}

#[test]
fn manual_two_scale_combination() {
    let dir = tempfile::tempdir().unwrap();
    let (x, y) = toy_files(dir.path());
    let out = asyncov(&[
        "estimate", "--x", x.to_str().unwrap(), "--y", y.to_str().unwrap(),
        "--estimators", "sub,multi", "--tuning", "K=2,M=2", "--format", "json",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // K=1 sum: 1*2 + 3*2 + 3*3 = 17; K=2 sum: (3*2 + 4*5) / 2 = 13
    assert_eq!(rows[0]["estimate"], 13.0);
    assert_eq!(rows[1]["estimate"], -17.0 + 2.0 * 13.0);
    assert_eq!(rows[1]["tuning"], 2);
}

#[test]
fn tuning_beyond_grid_fails() {
    let dir = tempfile::tempdir().unwrap();
    let (x, y) = toy_files(dir.path());
    let out = asyncov(&["estimate", "--x", x.to_str().unwrap(), "--y", y.to_str().unwrap(), "--estimators", "sub", "--tuning", "K=9"]);
    assert_single_error_line(&out, "E_TUNING_RANGE");
    assert!(stderr(&out).contains("K=9 outside [1, 3]"), "{}", stderr(&out));
}

#[test]
fn error_paths_have_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (x, _) = toy_files(dir.path());
    let dup = write(dir.path(), "dup.csv", "0,1\n1,2\n1,3\n");
    let xs = x.to_str().unwrap();

    let out = asyncov(&["estimate", "--x", xs, "--y", dup.to_str().unwrap()]);
    assert_single_error_line(&out, "E_NON_MONOTONE");
    assert!(stderr(&out).contains("dup.csv:3"), "{}", stderr(&out));

    let out = asyncov(&["estimate", "--x", xs, "--y", dup.to_str().unwrap(), "--dedup", "--estimators", "hy"]);
    assert!(out.status.success(), "{}", stderr(&out));

    let out = asyncov(&["estimate", "--x", xs, "--y", "/nonexistent/y.csv"]);
    assert_single_error_line(&out, "E_IO");

    let out = asyncov(&["estimate", "--x", xs, "--y", xs, "--tuning", "oracle"]);
    assert_single_error_line(&out, "E_USAGE");

    let out = asyncov(&["estimate", "--x", xs]);
    assert_single_error_line(&out, "E_USAGE");
    assert_eq!(out.status.code(), Some(2));

    let out = asyncov(&["simulate", "--rho", "1.5", "--reps", "2"]);
    assert_single_error_line(&out, "E_DEGENERATE_CONFIG");

    let out = asyncov(&["lan", "--rho", "0.99", "--eta-x", "0.1", "--eta-y", "0.1", "--h", "5", "--n-list", "10"]);
    assert_single_error_line(&out, "E_PARAM_RANGE");
}

#[test]
fn oracle_tuning_with_noise_flags() {
    let dir = tempfile::tempdir().unwrap();
    let (x, y) = toy_files(dir.path());
    let out = asyncov(&[
        "estimate", "--x", x.to_str().unwrap(), "--y", y.to_str().unwrap(),
        "--tuning", "oracle", "--eta2-x", "0.01", "--eta2-y", "0.01",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv_column(&text, "eta2_x"), ["", "0.01", "0.01"]);
}

#[test]
fn simulate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, extra: &[&str]| {
        let reps = dir.path().join(format!("{name}.csv"));
        let mut args = vec![
            "simulate", "--theta-x", "0.005", "--theta-y", "0.004", "--reps", "12", "--seed", "42",
            "--out", reps.to_str().unwrap(),
        ];
        args.extend_from_slice(extra);
        let out = asyncov(&args);
        assert!(out.status.success(), "{}", stderr(&out));
        (std::fs::read(reps).unwrap(), out.stdout)
    };
    let a = run("a", &[]);
    let b = run("b", &["--threads", "3"]);
    let c = run("c", &["--serial"]);
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert!(String::from_utf8(a.1.clone()).unwrap().starts_with("estimator,mean,bias,variance,rmse,mean_tuning,mean_nsync\n"));
    assert_eq!(String::from_utf8(a.0.clone()).unwrap().lines().count(), 1 + 12 * 3);
    let d = run("d", &["--seed", "43"]);
    assert_ne!(a.0, d.0);
}

#[test]
fn config_file_fills_in_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.conf", "# small run\ntheta_x = 0.005\ntheta_y = 0.005\nreps = 4\nestimators = hy\nseed = 9\n");
    let from_file = asyncov(&["simulate", "--config", cfg.to_str().unwrap()]);
    let explicit = asyncov(&["simulate", "--theta-x", "0.005", "--theta-y", "0.005", "--reps", "4", "--estimators", "hy", "--seed", "9"]);
    assert!(from_file.status.success(), "{}", stderr(&from_file));
    assert_eq!(from_file.stdout, explicit.stdout);
    let overridden = asyncov(&["simulate", "--config", cfg.to_str().unwrap(), "--seed", "10"]);
    assert!(overridden.status.success());
    assert_ne!(overridden.stdout, from_file.stdout);
}

#[test]
fn lan_tables() {
    let out = asyncov(&["lan", "--rho", "0.5", "--eta-x", "0.1", "--eta-y", "0.1", "--h", "0", "--n-list", "10,100"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv_column(&text, "sum_gamma_sq"), ["0.0", "0.0"]);

    let out = asyncov(&["lan", "--rho", "0.5", "--eta-x", "0.2", "--eta-y", "0.1", "--n-list", "100,1000,10000"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let lower = csv_column(&text, "lower_sum_gamma_sq");
    let upper = csv_column(&text, "upper_sum_gamma_sq");
    assert_eq!(lower.len(), 3);
    for (l, u) in lower.iter().zip(&upper) {
        assert!(l.parse::<f64>().unwrap() <= u.parse::<f64>().unwrap());
    }

    let out = asyncov(&["lan", "--rho", "0.5", "--eta-x", "0.1", "--eta-y", "0.1", "--h", "1", "--n-list", "100000"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rel: f64 = csv_column(&text, "rel_error")[0].parse().unwrap();
    assert!(rel < 0.02);
}

#[test]
fn simulated_series_round_trip_through_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = SimConfig { theta_x: 1.0 / 500.0, theta_y: 1.0 / 700.0, ..SimConfig::desk_scale() };
    let pair = simulate_pair(&cfg, &mut replication_rng(8, 0)).unwrap();
    let (xp, yp) = (dir.path().join("x.csv"), dir.path().join("y.csv"));
    save_ticks(&xp, &pair.x).unwrap();
    save_ticks(&yp, &pair.y).unwrap();
    let x = ingest_ticks(&xp, &IngestOptions::default()).unwrap();
    let y = ingest_ticks(&yp, &IngestOptions::default()).unwrap();
    assert_eq!(x, pair.x);
    assert_eq!(y, pair.y);
    let before = estimate_all(&pair.x, &pair.y, &EstimatorKind::ALL, TuningPolicy::Plugin, None).unwrap();
    let after = estimate_all(&x, &y, &EstimatorKind::ALL, TuningPolicy::Plugin, None).unwrap();
    for (a, b) in before.iter().zip(&after) {
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
    }

    // and through the binary
    let out = asyncov(&["estimate", "--x", xp.to_str().unwrap(), "--y", yp.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for (row, report) in rows.as_array().unwrap().iter().zip(&before) {
        assert_eq!(row["estimate"].as_f64().unwrap().to_bits(), report.estimate.to_bits());
    }
}
