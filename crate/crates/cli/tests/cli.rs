use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

const LJ: &str = r#"{"family":"lennard_jones_type","a1":2,"a2":1,"x1":3,"x2":6}"#;
const CONVEX: &str = r#"{"family":"inverse_power_sum","terms":[{"a":14,"x":2},{"a":-40,"x":3},{"a":35,"x":4}]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lattice-optima"))
        .args(args)
        .env_remove("LATTICE_OPTIMA_THREADS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).expect("valid json");
    assert_eq!(v["schema"], 1);
    v
}

fn csv_rows(args: &[&str]) -> Vec<Vec<f64>> {
    let mut all = args.to_vec();
    all.extend(["--format", "csv"]);
    let out = run(&all);
    assert!(out.status.success());
    String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            l.split(',')
                .map(|c| match c {
                    "true" => 1.0,
                    "false" => 0.0,
                    _ => c.parse().unwrap(),
                })
                .collect()
        })
        .collect()
}

#[test]
fn counterexample_exact_and_box() {
    let v = json(&["counterexample"]);
    assert!((v["discriminant"].as_f64().unwrap() - 24.2714006642541).abs() < 1e-9);
    assert!((v["A1"].as_f64().unwrap() - 2.3148642738).abs() < 1e-9);
    assert!((v["A2"].as_f64().unwrap() - 3.7603197449).abs() < 1e-9);
    let b = json(&["counterexample", "--box", "100"]);
    assert!((b["discriminant"].as_f64().unwrap() - 24.231435).abs() < 1e-4);
    assert!((b["A1"].as_f64().unwrap() - 2.3152307).abs() < 1e-5);
    assert!((b["A2"].as_f64().unwrap() - 3.759353).abs() < 1e-5);
}

#[test]
fn bounds_for_lennard_jones() {
    let v = json(&["bounds", "--potential", LJ]);
    let b = v["high_density_area_bound"].as_f64().unwrap();
    assert!((b - PI / 120f64.cbrt()).abs() < 1e-12);
    assert_eq!(v["high_density_route"], "lennard_jones_high_density");
    assert!(v["low_density_area_bound"]["area"].as_f64().unwrap() > b);
}

#[test]
fn zeta_matches_direct_sum() {
    let v = json(&["zeta", "--shape", "square", "--two-s", "4"]);
    assert!(v["relative_difference"].as_f64().unwrap() < 1e-10);
    let v = json(&["zeta", "--shape", "triangular", "--two-s", "6", "--area", "2.5"]);
    assert!(v["relative_difference"].as_f64().unwrap() < 1e-10);
}

#[test]
fn energy_reports_both_methods() {
    let v = json(&["energy", "--lattice", "0.1,1.3", "--area", "1", "--potential", CONVEX]);
    let d = v["direct"]["value"].as_f64().unwrap();
    let i = v["integral"]["value"].as_f64().unwrap();
    assert!((d - i).abs() <= 1e-8 * d.abs());
}

#[test]
fn check_prints_route() {
    let v = json(&["check", "--area", "0.6", "--potential", LJ]);
    assert_eq!(v["certification_route"], "lennard_jones_high_density");
    assert_eq!(v["positive"], true);
    let v = json(&["check", "--area", "1", "--potential", LJ]);
    assert_eq!(v["status"], "sampled_negative");
}

#[test]
fn plot_series() {
    let h = csv_rows(&["plotdata", "--what", "h", "--range", "1,5", "--steps", "401"]);
    assert_eq!(h.len(), 401);
    let min = h.iter().min_by(|a, b| a[1].total_cmp(&b[1])).unwrap();
    assert!((min[0] - 2.6285).abs() < 0.01);

    let g = csv_rows(&["plotdata", "--what", "gA", "--range", "1,3", "--area", "1", "--potential", LJ]);
    assert!(g.iter().any(|r| r[1] < 0.0) && g.iter().any(|r| r[1] > 0.0));

    let v = csv_rows(&["plotdata", "--what", "potential", "--range", "0.8,3", "--potential", CONVEX]);
    assert!(v.iter().all(|r| r[1] > 0.0));
    assert!(v.windows(2).all(|w| w[1][1] < w[0][1]));
    assert!(v.windows(3).all(|w| w[0][1] - 2.0 * w[1][1] + w[2][1] > 0.0));
}

#[test]
fn csv_tables_have_fixed_columns() {
    let out = run(&["table2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x1,x2,d0"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 62);
    assert!(rows.iter().all(|r| r.split(',').count() == 3));
    let t1 = csv_rows(&["table1", "--pairs", "2:3"]);
    assert!((t1[0][4] - 0.93).abs() < 0.01);
}

#[test]
fn deterministic_single_thread_output() {
    let args = ["minimize", "--area", "1", "--grid", "12", "--potential", LJ, "--threads", "1", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["classification"], "triangular");
}

#[test]
fn scan_classifies_each_area() {
    let out = run(&[
        "scan", "--area-from", "0.5", "--area-to", "1", "--steps", "2", "--grid", "12", "--potential", CONVEX,
        "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().skip(1).all(|l| l.contains("triangular")));
}

#[test]
fn potential_from_file_and_env_threads() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lj.json");
    std::fs::write(&path, LJ).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_lattice-optima"))
        .args(["bounds", "--format", "json", "--potential", path.to_str().unwrap()])
        .env("LATTICE_OPTIMA_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn verify_is_seeded() {
    let a = json(&["verify", "--area", "0.6", "--samples", "10", "--seed", "7", "--potential", LJ]);
    let b = json(&["verify", "--area", "0.6", "--samples", "10", "--seed", "7", "--potential", LJ]);
    assert_eq!(a, b);
    assert_eq!(a["lattices_below_triangular"], 0);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["check", "--area", "1"]).status.code(), Some(2));
    assert_eq!(run(&["bounds", "--potential", "{\"family\":\"nope\"}"]).status.code(), Some(2));
    assert_eq!(run(&["bounds", "--potential", "/no/such/file.json"]).status.code(), Some(2));
    assert_eq!(run(&["theta", "--lattice", "square", "--area", "-1", "--alpha", "1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));

    let out = run(&[
        "energy", "--lattice", "square", "--area", "1", "--potential", CONVEX, "--max-terms", "5", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert!(v["error"]["kind"].is_string());

    let out = run(&["global-min", "--potential", CONVEX]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}
