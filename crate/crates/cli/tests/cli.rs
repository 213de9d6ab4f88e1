use std::path::Path;
use std::process::{Command, Output};

use png_core::table::DistTable;

fn png(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_png-droplet"))
        .args(args)
        .env_remove("PNG_DROPLET_TOL")
        .env_remove("PNG_DROPLET_KS_TOL")
        .env_remove("PNG_DROPLET_TV_TOL")
        .output()
        .expect("binary runs")
}

fn run_ok(args: &[&str]) -> String {
    let out = png(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn flat_probability_matches_exponential() {
    let text = run_ok(&[
        "simulate",
        "--t",
        "1",
        "--samples",
        "100000",
        "--observable",
        "flat-prob",
    ]);
    let table = DistTable::parse(&text, "csv".parse().unwrap()).unwrap();
    let p = table.column("fraction").unwrap()[0];
    let sigma = table.column("sigma").unwrap()[0];
    let target = (-2.0f64).exp();
    assert!((p - target).abs() < 4.0 * sigma, "{p} vs {target}");
    assert_eq!(table.meta("seed"), Some("1"));
    assert!(table.meta("version").is_some());
}

#[test]
fn h0_histogram_matches_exact_law() {
    let dir = tempfile::tempdir().unwrap();
    let (sim, exact) = (path(dir.path(), "h0.csv"), path(dir.path(), "exact.json"));
    run_ok(&[
        "simulate",
        "--t",
        "5",
        "--observable",
        "h0",
        "--samples",
        "100000",
        "-o",
        &sim,
    ]);
    run_ok(&["exact", "--curve", "height-cdf", "--t", "5", "-o", &exact]);
    let report: serde_json::Value =
        serde_json::from_str(&run_ok(&["compare", &sim, &exact])).unwrap();
    assert_eq!(report["pass"], true);
    assert!(report["tv_distance"].as_f64().unwrap() < 0.02);
}

#[test]
fn zero_samples_is_a_usage_error() {
    let out = png(&[
        "simulate",
        "--t",
        "5",
        "--observable",
        "h0",
        "--samples",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_parameters_exit_with_two() {
    assert_eq!(
        png(&[
            "simulate",
            "--t",
            "-1",
            "--observable",
            "h0",
            "--samples",
            "5"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        png(&[
            "simulate",
            "--t",
            "2",
            "--observable",
            "steps",
            "--dynamics",
            "lis",
            "--samples",
            "5"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        png(&["exact", "--curve", "f2", "--grid", "1:0:0.1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        png(&["compare", "/nonexistent/a.csv", "/nonexistent/b.csv"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn uncertifiable_tolerance_exits_with_three() {
    let out = png(&[
        "exact", "--curve", "f2", "--grid", "0:1:1", "--tol", "1e-30",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
}

#[test]
fn tolerance_env_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_png-droplet"))
        .args(["exact", "--curve", "f2", "--grid", "0:1:1"])
        .env("PNG_DROPLET_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn f2_curve_is_a_cdf() {
    let text = run_ok(&["exact", "--curve", "f2", "--grid", "-6:4:0.1"]);
    let table = DistTable::parse(&text, "csv".parse().unwrap()).unwrap();
    let cdf = table.column("cdf").unwrap();
    assert_eq!(cdf.len(), 101);
    assert!(cdf.windows(2).all(|w| w[1] >= w[0]));
    assert!(*cdf.last().unwrap() > 0.9999);
    assert!(cdf[0] < 1e-6);
}

#[test]
fn height_cdf_is_integer_indexed() {
    let text = run_ok(&["exact", "--curve", "height-cdf", "--t", "5"]);
    let table = DistTable::parse(&text, "csv".parse().unwrap()).unwrap();
    let n = table.column("n").unwrap();
    assert!(n.iter().enumerate().all(|(i, &v)| v == i as f64));
    let cdf = table.column("cdf").unwrap();
    let direct = png_core::determinantal::height_cdf_exact(5.0, 8, 1e-12).unwrap();
    // P(h <= 7) = P(h < 8)
    assert!((cdf[7] - direct.probability).abs() < 1e-9);
}

#[test]
fn table_against_itself_passes_with_zero_distance() {
    let dir = tempfile::tempdir().unwrap();
    let file = path(dir.path(), "h.csv");
    run_ok(&["exact", "--curve", "height-cdf", "--t", "3", "-o", &file]);
    let report: serde_json::Value =
        serde_json::from_str(&run_ok(&["compare", &file, &file])).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["ks_distance"], 0.0);
    assert_eq!(report["tv_distance"], 0.0);
    assert_eq!(report["mean_delta"], 0.0);
}

#[test]
fn mismatched_time_fails() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(dir.path(), "a.csv"), path(dir.path(), "b.csv"));
    run_ok(&[
        "simulate",
        "--t",
        "5",
        "--observable",
        "h0",
        "--samples",
        "2000",
        "-o",
        &a,
    ]);
    run_ok(&["exact", "--curve", "height-cdf", "--t", "6", "-o", &b]);
    let out = png(&["compare", &a, &b]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn scaled_height_against_f2() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(dir.path(), "s.csv"), path(dir.path(), "f2.csv"));
    run_ok(&[
        "simulate",
        "--t",
        "100",
        "--observable",
        "scaled-h",
        "--samples",
        "10000",
        "-o",
        &a,
    ]);
    run_ok(&["exact", "--curve", "f2", "-o", &b]);
    let report: serde_json::Value = serde_json::from_str(&run_ok(&["compare", &a, &b])).unwrap();
    assert!(report["ks_distance"].as_f64().unwrap() < 0.05, "{report}");
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let data = |threads: &str| {
        run_ok(&[
            "--threads",
            threads,
            "simulate",
            "--t",
            "3",
            "--observable",
            "joint",
            "--y",
            "0.5",
            "--samples",
            "500",
        ])
        .lines()
        .filter(|l| !l.starts_with("# args"))
        .collect::<Vec<_>>()
        .join("\n")
    };
    assert_eq!(data("1"), data("4"));
}

#[test]
fn tables_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, json) = (path(dir.path(), "x.csv"), path(dir.path(), "x.json"));
    run_ok(&[
        "simulate",
        "--t",
        "2",
        "--observable",
        "steps",
        "--samples",
        "300",
        "-o",
        &csv,
    ]);
    run_ok(&[
        "simulate",
        "--t",
        "2",
        "--observable",
        "steps",
        "--samples",
        "300",
        "-o",
        &json,
    ]);
    let a = DistTable::read(Path::new(&csv)).unwrap();
    let b = DistTable::read(Path::new(&json)).unwrap();
    assert_eq!(a.rows, b.rows);
    assert_eq!(a.to_csv().unwrap(), std::fs::read_to_string(&csv).unwrap());
}
