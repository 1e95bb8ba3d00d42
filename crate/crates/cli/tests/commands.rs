use std::path::Path;
use std::process::{Command, Output};

use qphase::fit_success_curve;
use qphase_cli::export::read_sweep_csv;
use qphase_cli::sweep::{fit_rows, sweep_success, SweepConfig, SweepMode};

fn qphase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qphase"))
        .args(args)
        .env_remove("QPHASE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SMALL: &[&str] = &["sweep-success", "--shots", "200", "--repetitions", "5", "--points", "17"];

#[test]
fn sweep_csv_is_deterministic_across_thread_counts() {
    let a = qphase(SMALL);
    assert!(a.status.success());
    let b = Command::new(env!("CARGO_BIN_EXE_qphase"))
        .args(SMALL)
        .env_remove("QPHASE_SEED")
        .env("RAYON_NUM_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().next(), Some("delta,p_mean,p_std,p_exact"));
    assert_eq!(text.lines().count(), 18);
}

#[test]
fn seed_flag_and_environment() {
    let base = qphase(SMALL);
    let mut args = SMALL.to_vec();
    args.extend(["--seed", "99"]);
    let flagged = qphase(&args);
    assert_ne!(base.stdout, flagged.stdout);

    let env = Command::new(env!("CARGO_BIN_EXE_qphase")).args(SMALL).env("QPHASE_SEED", "99").output().unwrap();
    assert_eq!(env.stdout, flagged.stdout);
    // the flag wins over the environment
    let mut args = SMALL.to_vec();
    args.extend(["--seed", "20240917"]);
    let both = Command::new(env!("CARGO_BIN_EXE_qphase")).args(&args).env("QPHASE_SEED", "99").output().unwrap();
    assert_eq!(both.stdout, base.stdout);
}

#[test]
fn three_points_give_three_rows() {
    let o = qphase(&["sweep-success", "--points", "3", "--shots", "10", "--repetitions", "2", "--delta-min", "-2", "--delta-max", "2"]);
    // three points cannot be fitted
    assert_eq!(o.status.code(), Some(2));

    let cfg = SweepConfig { delta_points: 3, n_shot: 10, n_repetition: 2, ..Default::default() };
    let err = sweep_success(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    let mut buf = Vec::new();
    let rows = vec![
        qphase_cli::sweep::SweepRow { delta: -1.0, p_mean: 0.9, p_std: 0.1, p_exact: 0.9 },
        qphase_cli::sweep::SweepRow { delta: 0.0, p_mean: 1.0, p_std: 0.0, p_exact: 1.0 },
        qphase_cli::sweep::SweepRow { delta: 1.0, p_mean: 0.9, p_std: 0.1, p_exact: 0.9 },
    ];
    qphase_cli::export::write_sweep_csv(&rows, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 4);
}

#[test]
fn export_round_trip_reproduces_fit() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let json = dir.path().join("sweep.json");
    let base = ["sweep-success", "--shots", "300", "--repetitions", "8", "--points", "33"];
    let mut a = base.to_vec();
    a.extend(["--output", csv.to_str().unwrap()]);
    assert!(qphase(&a).status.success());
    let mut b = base.to_vec();
    b.extend(["--format", "json", "--output", json.to_str().unwrap()]);
    assert!(qphase(&b).status.success());

    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let from_report: qphase::FitParams = serde_json::from_value(report["fit"].clone()).unwrap();
    assert_eq!(report["config"]["seed"], 20240917);

    let fit = qphase(&["fit", "--input", csv.to_str().unwrap(), "--shots", "300", "--repetitions", "8"]);
    assert!(fit.status.success());
    let from_csv: qphase::FitParams = serde_json::from_str(&stdout(&fit)).unwrap();
    assert_eq!(from_csv, from_report);

    let rows = read_sweep_csv(&csv).unwrap();
    assert_eq!(fit_rows(&rows, 300, 8).unwrap(), from_report);
    let fit_json = qphase(&["fit", "--input", json.to_str().unwrap(), "--shots", "300", "--repetitions", "8"]);
    assert_eq!(serde_json::from_str::<qphase::FitParams>(&stdout(&fit_json)).unwrap(), from_report);
}

#[test]
fn invalid_paths_exit_with_io_code() {
    let o = qphase(&["sweep-success", "--shots", "5", "--repetitions", "2", "--output", "/nonexistent/dir/out.csv"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/dir/out.csv"));
    let o = qphase(&["fit", "--input", "/nonexistent/in.csv"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(qphase(&["sweep-success", "--shots", "0"]).status.code(), Some(2));
    assert_eq!(qphase(&["sweep-success", "--completion", "qr"]).status.code(), Some(2));
    assert_eq!(qphase(&["no-such-command"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_qphase")).args(SMALL).env("QPHASE_SEED", "abc").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn single_shot_sweep_is_well_formed() {
    let o = qphase(&["sweep-success", "--shots", "1", "--repetitions", "1", "--points", "9"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 4);
        assert!(cols[1] == "0" || cols[1] == "1" || cols[1] == "0.0" || cols[1] == "1.0", "{line}");
        assert_eq!(cols[2].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn exact_mode_recovers_closed_form() {
    let cfg = SweepConfig { mode: SweepMode::Exact, n_repetition: 3, ..Default::default() };
    let r = sweep_success(&cfg).unwrap();
    assert!((r.fit.a - 533.0 / 1400.0).abs() <= 1e-8);
    assert!((r.fit.b - 1.0).abs() <= 1e-8);
    assert!(r.fit.c.abs() <= 1e-8);
    for row in &r.rows {
        assert_eq!(row.p_mean, row.p_exact);
        assert_eq!(row.p_std, 0.0);
    }
    // the weighted path falls back to an unweighted fit
    let d: Vec<f64> = r.rows.iter().map(|x| x.delta).collect();
    let p: Vec<f64> = r.rows.iter().map(|x| x.p_mean).collect();
    assert_eq!(fit_success_curve(&d, &p, None).unwrap(), r.fit);
}

#[test]
fn sampled_rows_stay_in_band() {
    let cfg = SweepConfig { n_shot: 500, n_repetition: 20, ..Default::default() };
    let r = sweep_success(&cfg).unwrap();
    assert!(r.flagged.len() <= 1, "flagged {:?}", r.flagged);
    assert!(r.rows.iter().all(|x| (0.0..=1.0).contains(&x.p_mean)));
    let s = r.scatter.unwrap();
    assert_eq!(s.fits, 20);
    assert!(s.std_a > 0.0);
}

#[test]
fn demo_outputs() {
    let o = qphase(&["demo-quadratic"]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 8);
    assert!(doc["oracle_deviation"].as_f64().unwrap() <= 1e-10);
    assert!((doc["alpha"].as_f64().unwrap() - 5.0 / 140.0).abs() < 1e-15);

    let o = qphase(&["demo-quadratic", "--qubits", "1", "--alpha", "0.5", "--cycles", "10", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("x,magnitude,phase,unwrapped_phase,ideal_phase,deviation"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn verify_reports_machine_readable_summary() {
    let o = qphase(&["verify", "--suite", "partial-phase"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["passed"], true);
    assert!(doc["checks"].as_array().unwrap().iter().all(|c| c["suite"] == "partial-phase"));
}

#[test]
fn trotter_table_output() {
    let o = qphase(&["trotter", "--steps", "8,16,32", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let d: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(d.len(), 3);
    assert!(d[0] / d[1] > 1.7 && d[1] / d[2] > 1.7);
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn protocol_command_on_amplitude_files() {
    let dir = tempfile::tempdir().unwrap();
    let psi = dir.path().join("psi.json");
    let phi = dir.path().join("phi.json");
    write(&psi, "[[1,0],[1,0]]");
    write(&phi, "[[0,0],[1,0]]");
    let o = qphase(&[
        "protocol", "--psi", psi.to_str().unwrap(), "--phi", phi.to_str().unwrap(),
        "--alpha", "1.2", "--cycles", "4", "--mode", "exact",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["cycles_run"], 4);
    let amps = doc["final_amplitudes"].as_array().unwrap();
    let phase = |v: &serde_json::Value| v[1].as_f64().unwrap().atan2(v[0].as_f64().unwrap());
    assert!((phase(&amps[1]) - phase(&amps[0]) - 1.2).abs() < 1e-12);

    write(&phi, "[[0,0],[1,0],[0,0]]");
    let o = qphase(&["protocol", "--psi", psi.to_str().unwrap(), "--phi", phi.to_str().unwrap(), "--delta", "0.1"]);
    assert_ne!(o.status.code(), Some(0));
    write(&phi, "not json");
    let o = qphase(&["protocol", "--psi", psi.to_str().unwrap(), "--phi", phi.to_str().unwrap(), "--delta", "0.1"]);
    assert_eq!(o.status.code(), Some(3));
}
