//! End-to-end checks of the command-line interface: output formats,
//! determinism, config-file and environment layering, failure modes.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stabrkc"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn region_csv_is_deterministic_and_well_formed() {
    let args = [
        "region", "--method", "nprkc", "--s", "10", "--m", "2", "--p-min", "-70", "--p-max", "2",
        "--q-min", "-5", "--q-max", "5", "--np", "40", "--nq", "30",
    ];
    let first = run(&args);
    assert!(first.status.success());
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout, "identical invocations must be byte-identical");

    let text = stdout(&first);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "p,q,absR");
    assert_eq!(text.lines().count(), 1 + 40 * 30);
    for line in text.lines().skip(1).take(5) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 3);
        fields.iter().for_each(|f| {
            f.parse::<f64>().unwrap();
        });
    }
}

#[test]
fn region_rejects_inverted_range_with_nonzero_exit() {
    let out = run(&["region", "--method", "rkc", "--s", "5", "--p-min", "3", "--p-max", "-3"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn bench_csv_runs_and_respects_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("refs");
    let out = run(&[
        "bench", "--example", "ex2a", "--tol", "1e-2", "--method", "nprkc2", "--cache-dir",
        cache.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "tol,method,err_rms,err_max,n_accept,n_reject,nfd,nfa,nf_total,wall_ms"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[1], "nprkc2");
    let err_rms: f64 = row[2].parse().unwrap();
    assert!(err_rms <= 1e-2, "Err = {err_rms}");

    // the reference is now cached; --no-compute-ref must succeed...
    let ok = bin()
        .args(["bench", "--example", "ex2a", "--tol", "1e-2", "--method", "nprkc2", "--cache-dir"])
        .arg(&cache)
        .arg("--no-compute-ref")
        .output()
        .unwrap();
    assert!(ok.status.success());

    // ...and fail for a configuration that was never computed
    let missing = bin()
        .args(["bench", "--example", "ex2c", "--tol", "1e-2", "--method", "nprkc2", "--cache-dir"])
        .arg(&cache)
        .arg("--no-compute-ref")
        .output()
        .unwrap();
    assert!(!missing.status.success());
}

#[test]
fn bench_rejects_empty_tolerances() {
    let out = run(&["bench", "--example", "ex2a", "--method", "nprkc2"]);
    assert!(!out.status.success());
}

#[test]
fn bench_json_schema_versioned() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "bench", "--example", "ex2c", "--tol", "1e-2", "--method", "nprkc1,nprkc2", "--format",
        "json", "--cache-dir",
        dir.path().join("refs").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["records"].as_array().unwrap().len(), 2);
}

#[test]
fn convergence_reports_slope_near_two() {
    let out = run(&[
        "convergence", "--method", "nprkc", "--problem", "ad1d", "--n", "24", "--a", "1", "--d",
        "1", "--t-end", "0.05", "--h-ladder", "0.003125,0.0015625,0.00078125,0.000390625",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["schema"], 1);
    let slope = v["slope"].as_f64().unwrap();
    assert!((1.7..=2.3).contains(&slope), "slope {slope}");
}

#[test]
fn convergence_rejects_single_rung() {
    let out = run(&["convergence", "--method", "rkc", "--problem", "ad1d", "--n", "16", "--h-ladder", "0.01"]);
    assert!(!out.status.success());
}

#[test]
fn integrate_writes_state_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("state.txt");
    let trace = dir.path().join("trace.csv");
    let out = run(&[
        "integrate", "--problem", "ad1d", "--n", "64", "--a", "0.1", "--d", "1", "--t-end", "0.05",
        "--tol", "1e-4", "--method", "nprkc2", "--out", state.to_str().unwrap(), "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["dim"], 64);
    assert!(v["n_accept"].as_u64().unwrap() > 0);

    let state_text = std::fs::read_to_string(&state).unwrap();
    assert_eq!(state_text.lines().count(), 64);
    let trace_text = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(trace_text.lines().next().unwrap(), "t,h,s,m,err,accepted");
    assert!(trace_text.lines().count() > 1);
}

#[test]
fn config_file_and_env_layering() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "method = rkc\ns = 5\nnp = 12\nnq = 10\np-min = -17\np-max = 1\nq-min = -4\nq-max = 4\n").unwrap();

    // config file supplies everything
    let from_file = bin()
        .args(["--config", cfg.to_str().unwrap(), "region"])
        .output()
        .unwrap();
    assert!(from_file.status.success(), "stderr: {}", String::from_utf8_lossy(&from_file.stderr));
    assert_eq!(stdout(&from_file).lines().count(), 1 + 12 * 10);

    // environment overrides the file
    let from_env = bin()
        .args(["--config", cfg.to_str().unwrap(), "region"])
        .env("STABRKC_NP", "7")
        .output()
        .unwrap();
    assert!(from_env.status.success());
    assert_eq!(stdout(&from_env).lines().count(), 1 + 7 * 10);

    // CLI flag overrides both
    let from_flag = bin()
        .args(["--config", cfg.to_str().unwrap(), "region", "--np", "5"])
        .env("STABRKC_NP", "7")
        .output()
        .unwrap();
    assert!(from_flag.status.success());
    assert_eq!(stdout(&from_flag).lines().count(), 1 + 5 * 10);
}

#[test]
fn region_matches_published_sublevel_sets(){
    // the s = 5 region along the real axis covers [-16.25, 0] and stops
    // before -17 (the left end of the plot window)
    let out = run(&[
        "region", "--method", "rkc", "--s", "5", "--p-min", "-17", "--p-max", "1", "--q-min",
        "-4", "--q-max", "4", "--np", "181", "--nq", "81",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut covered = true;
    let mut leftmost_stable = 0.0f64;
    for line in text.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let (p, q, absr) = (f[0], f[1], f[2]);
        if q == 0.0 {
            if (-16.25..=0.0).contains(&p) && absr > 1.0 + 1e-12 {
                covered = false;
            }
            if absr <= 1.0 && p < leftmost_stable {
                leftmost_stable = p;
            }
        }
    }
    assert!(covered, "real-axis sublevel set must cover [-16.25, 0]");
    assert!(leftmost_stable > -17.0 + 0.05, "region should end before the window edge");
}
