//! End-to-end exercises of the CLI surface: flag parsing, file formats,
//! CSV/JSON output contracts, and error paths.

use std::process::{Command, Output};

fn riesz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riesz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn eval_first_mean_closed_form() {
    let x = format!("{}", (4.0f64).ln());
    let out = riesz(&[
        "eval",
        "--frequency",
        "lognat:3",
        "--rule",
        "ones",
        "--k",
        "1",
        "--x",
        &x,
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut it = text.split_whitespace();
    let re: f64 = it.next().unwrap().parse().unwrap();
    let im: f64 = it.next().unwrap().parse().unwrap();
    assert!((re - (3.0 - (6.0f64).ln() / (4.0f64).ln())).abs() < 1e-12);
    assert_eq!(im, 0.0);
}

#[test]
fn eval_from_polynomial_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("poly.json");
    std::fs::write(
        &path,
        r#"{"frequency": [0.0, 1.0], "coefficients": [[1.0, 0.0], [2.0, -1.0]]}"#,
    )
    .unwrap();
    let out = riesz(&[
        "eval",
        "--poly",
        path.to_str().unwrap(),
        "--k",
        "0",
        "--x",
        "10",
        "--s",
        "0,0",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut it = text.split_whitespace();
    let re: f64 = it.next().unwrap().parse().unwrap();
    let im: f64 = it.next().unwrap().parse().unwrap();
    assert_eq!((re, im), (3.0, -1.0));
}

#[test]
fn converge_emits_csv_and_summary() {
    let out = riesz(&[
        "converge",
        "--frequency",
        "naturals:64",
        "--rule",
        "power:-2",
        "--k",
        "1",
        "--x-hi",
        "1e5",
        "--tol",
        "1e-3",
    ]);
    assert!(out.status.success());
    let csv = stdout(&out);
    assert!(csv.starts_with("x,re,im\n"));
    assert_eq!(csv.lines().count(), 33); // header + 32 grid points
    let summary: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stderr)).unwrap();
    assert_eq!(summary["converged"], serde_json::Value::Bool(true));
}

#[test]
fn consistency_first_verdict_json() {
    let out = riesz(&[
        "consistency",
        "--frequency",
        "naturals:64",
        "--rule",
        "power:-2",
        "--which",
        "first",
        "--k",
        "0",
        "--ell",
        "1",
        "--x-hi",
        "1e8",
        "--tol",
        "1e-5",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "Agree");
    assert_eq!(v["which"], "first");
    assert!(v["hypothesis"]["limit"][0].as_f64().is_some());
}

#[test]
fn abscissa_csv_columns() {
    let out = riesz(&[
        "abscissa",
        "--frequency",
        "lognat:100",
        "--rule",
        "ones",
        "--x-hi",
        "4.6",
        "--x-points",
        "8",
    ]);
    assert!(out.status.success());
    let csv = stdout(&out);
    assert!(csv.starts_with("x,sup_norm\n"));
    let summary: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stderr)).unwrap();
    assert!(summary["slope"].as_f64().unwrap().is_finite());
}

#[test]
fn maximal_csv_is_seed_deterministic() {
    let args = [
        "maximal",
        "--frequency",
        "lognat:16",
        "--rule",
        "pm1",
        "--group",
        "primes",
        "--samples",
        "50",
        "--seed",
        "9",
    ];
    let a = riesz(&args);
    let b = riesz(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).starts_with("seed,max_value,arg_x\n"));
    assert_eq!(stdout(&a).lines().count(), 51);
}

#[test]
fn norms_reports_all_three_estimates() {
    let out = riesz(&[
        "norms",
        "--frequency",
        "lognat:4",
        "--rule",
        "ones",
        "--group",
        "auto",
        "--p",
        "2",
        "--t-half",
        "1000",
        "--samples",
        "5000",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let l2 = v["l2"].as_f64().unwrap();
    let bes = v["besicovitch"].as_f64().unwrap();
    let haar = v["haar"]["value"].as_f64().unwrap();
    assert!((l2 - 2.0).abs() < 1e-12); // sqrt(4) for four unit coefficients
    assert!((bes - l2).abs() / l2 < 0.05);
    assert!((haar - l2).abs() / l2 < 0.05);
}

#[test]
fn weaktype_single_member_has_alpha_mass_columns() {
    let out = riesz(&[
        "weaktype",
        "--n",
        "8",
        "--samples",
        "200",
        "--norm-samples",
        "1000",
        "--alpha-points",
        "16",
        "--seed",
        "3",
    ]);
    assert!(out.status.success());
    let csv = stdout(&out);
    assert!(csv.starts_with("alpha,mass\n"), "got header {:?}", csv.lines().next());
    assert_eq!(csv.lines().count(), 17);
    let summary: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stderr)).unwrap();
    assert!(summary["sup_alpha_mass"].as_f64().unwrap() > 0.0);
}

#[test]
fn verify_secondmeans_csv() {
    let out = riesz(&["verify", "--check", "secondmeans"]);
    assert!(out.status.success());
    let csv = stdout(&out);
    assert!(csv.starts_with("x,kernel_norm1,second_ratio,first_ratio,second_mass,first_mass\n"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn verify_rejects_unknown_check() {
    let out = riesz(&["verify", "--check", "nonsense"]);
    assert!(!out.status.success());
}

#[test]
fn experiment_run_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("fatou.json");
    std::fs::write(
        &cfg,
        r#"{
            "name": "fatou_demo",
            "seed": 5,
            "experiment": {
                "kind": "fatou",
                "n": 16,
                "coefficients": {"rule": "random_unit_disc"},
                "samples": 100,
                "u_lo": 1e-3,
                "u_hi": 10.0,
                "u_points": 12
            }
        }"#,
    )
    .unwrap();
    let out_dir = dir.path().join("results");
    let out = riesz(&[
        "experiment",
        "run",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(out_dir.join("fatou_demo.csv")).unwrap();
    assert!(csv.starts_with("u,mean_deviation\n"));
    assert_eq!(csv.lines().count(), 13);
    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out_dir.join("fatou_demo_summary.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(summary["name"], "fatou_demo");
    assert_eq!(summary["seed"], 5);
    assert!(summary["git_describe"].as_str().is_some());
    assert!(summary["metrics"]["max_deviation"].as_f64().unwrap() > 0.0);
}

#[test]
fn missing_poly_source_is_an_error() {
    let out = riesz(&["eval", "--k", "1", "--x", "2"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--poly") || err.contains("--frequency"));
}

#[test]
fn bad_frequency_spec_is_an_error() {
    let out = riesz(&[
        "eval",
        "--frequency",
        "fibonacci:5",
        "--k",
        "1",
        "--x",
        "2",
    ]);
    assert!(!out.status.success());
}
