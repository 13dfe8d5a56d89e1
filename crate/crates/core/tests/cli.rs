use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_virateich"))
        .args(args)
        .current_dir(dir)
        .env_remove("VIRATEICH_SEED")
        .output()
        .unwrap()
}

fn periodic(n: usize, weight: i32, f: impl Fn(f64) -> f64) -> Value {
    let values: Vec<f64> = (0..n).map(|k| f(k as f64 / n as f64)).collect();
    json!({ "n": n, "weight": weight, "values": values })
}

fn constant(n: usize, weight: i32, c: f64) -> Value {
    periodic(n, weight, |_| c)
}

fn write(dir: &Path, name: &str, v: &Value) {
    fs::write(dir.join(name), serde_json::to_string(v).unwrap()).unwrap();
}

fn read_json(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

/// Parses a CSV with a header row into (header, rows).
fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn values(v: &Value) -> Vec<f64> {
    v["values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn bad_grid_size_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["verify", "--n", "100"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["verify", "--n", "32"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "nope"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn verify_suite_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["a.json", "b.json"] {
        let o = run(&["verify", "--suite", "trumpet", "--n", "256", "--trials", "50", "--seed", "7", "--json-out", out], dir.path());
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    }
    let a = fs::read(dir.path().join("a.json")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.json")).unwrap());
    let report: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(report["suite"], "trumpet");
    assert_eq!(report["pass"], true);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["max_residual"].as_f64().unwrap() <= c["tolerance"].as_f64().unwrap()));
}

#[test]
fn seed_env_var_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_virateich"))
        .args(["verify", "--suite", "groupoid", "--trials", "2", "--json-out", "r.json"])
        .current_dir(dir.path())
        .env("VIRATEICH_SEED", "123")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read_json(dir.path(), "r.json")["seed"], 123);
}

#[test]
fn tightened_gates_fail_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--suite", "trumpet", "--trials", "3", "--tol-scale", "1e-12", "--json-out", "r.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(read_json(dir.path(), "r.json")["pass"], false);
}

#[test]
fn module_verify_writes_residual_csv() {
    let dir = tempfile::tempdir().unwrap();
    for module in ["trumpet", "groupoid"] {
        let o = run(&[module, "verify", "--trials", "4", "--seed", "3", "--csv-out", "r.csv"], dir.path());
        assert_eq!(o.status.code(), Some(0));
        let text = fs::read_to_string(dir.path().join("r.csv")).unwrap();
        assert!(text.starts_with("identity,max_residual,tolerance,trials,pass\n"));
        assert!(text.lines().skip(1).all(|l| l.ends_with(",true") && l.starts_with(module)));
    }
}

#[test]
fn from_asu_disk_is_quarter() {
    let dir = tempfile::tempdir().unwrap();
    let n = 64;
    write(dir.path(), "disk.json", &json!({ "a": constant(n, 0, 1.0), "s": constant(n, 0, 0.0), "u": constant(n, 0, -0.25) }));
    let o = run(&["hill", "from_asu", "--input", "disk.json", "--out", "t.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(values(&read_json(dir.path(), "t.json")).iter().all(|v| (v - 0.25).abs() < 1e-10));
    let (header, rows) = read_csv(&dir.path().join("t.json.csv"));
    assert_eq!(header, ["x", "T"]);
    assert_eq!(rows.len(), n);
    assert!(rows.iter().all(|r| (r[1] - 0.25).abs() < 1e-10));
}

#[test]
fn ds_normalize_writes_gauge_and_potential() {
    let dir = tempfile::tempdir().unwrap();
    let n = 64;
    let a = periodic(n, 0, |x| (0.3 * (2.0 * std::f64::consts::PI * x).sin()).exp());
    write(dir.path(), "c.json", &json!({ "a": a, "s": constant(n, 0, 0.2), "u": constant(n, 0, 0.1) }));
    assert_eq!(run(&["hill", "ds_normalize", "--input", "c.json", "--out", "ds.json"], dir.path()).status.code(), Some(0));
    assert_eq!(run(&["hill", "from_asu", "--input", "c.json", "--out", "t.json"], dir.path()).status.code(), Some(0));
    let ds = read_json(dir.path(), "ds.json");
    assert!(ds["gauge"].get("g11").is_some());
    let t = values(&read_json(dir.path(), "t.json"));
    for (a, b) in values(&ds["potential"]).iter().zip(&t) {
        assert!((a - b).abs() < 1e-8);
    }
}

#[test]
fn transform_constant_by_rotation() {
    let dir = tempfile::tempdir().unwrap();
    let n = 64;
    write(dir.path(), "t.json", &constant(n, 2, -1.0));
    write(dir.path(), "rot.json", &json!({ "phi": constant(n, 0, 0.3), "winding": 0 }));
    let o = run(&["hill", "transform", "--input", "t.json", "--diffeo", "rot.json", "--out", "out.json"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(values(&read_json(dir.path(), "out.json")).iter().all(|v| (v + 1.0).abs() < 1e-12));
    assert_eq!(run(&["hill", "transform", "--input", "t.json", "--out", "out.json"], dir.path()).status.code(), Some(2));
}

#[test]
fn monodromy_of_trumpet_potential() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "t.json", &constant(64, 2, -1.0));
    assert_eq!(run(&["hill", "monodromy", "--input", "t.json", "--out", "m.json"], dir.path()).status.code(), Some(0));
    let m = read_json(dir.path(), "m.json");
    assert!((m["trace"].as_f64().unwrap() - 2.0 * 1f64.cosh()).abs() < 1e-8);
    assert_eq!(m["class"], "hyperbolic");
}

#[test]
fn schema_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let n = 16;
    write(dir.path(), "bad.json", &json!({ "a": constant(n, 0, 1.0), "s": { "n": n, "weight": 0, "values": "x" }, "u": constant(n, 0, 0.0) }));
    let o = run(&["hill", "from_asu", "--input", "bad.json", "--out", "t.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("s.values"));
    let o = run(&["hill", "from_asu", "--input", "missing.json", "--out", "t.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn nonpositive_a_is_computational_failure() {
    let dir = tempfile::tempdir().unwrap();
    let n = 16;
    write(dir.path(), "c.json", &json!({ "a": periodic(n, 0, |x| x - 0.5), "s": constant(n, 0, 0.0), "u": constant(n, 0, 0.0) }));
    let o = run(&["hill", "from_asu", "--input", "c.json", "--out", "t.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&o.stderr).is_empty());
}

#[test]
fn darboux_of_identity_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "p.json", &json!({ "ell": 1.0, "F": { "phi": constant(64, 0, 0.0), "winding": 0 } }));
    assert_eq!(run(&["emit", "darboux", "--input", "p.json", "--out", "u.csv"], dir.path()).status.code(), Some(0));
    let (header, rows) = read_csv(&dir.path().join("u.csv"));
    assert_eq!(header, ["x", "u"]);
    assert_eq!(rows.len(), 64);
    assert!(rows.iter().all(|r| r[1].abs() < 1e-14));
}

#[test]
fn boundary_moment_of_identity_trumpets() {
    let dir = tempfile::tempdir().unwrap();
    let id = json!({ "phi": constant(32, 0, 0.0), "winding": 0 });
    let point = json!({
        "g": 1, "r": 2,
        "interior": [[1.0, 0.2], [2.0, -0.3]],
        "boundary": [{ "ell": 1.5, "F": id }, { "ell": 0.5, "F": id }],
    });
    write(dir.path(), "fn.json", &point);
    let o = run(&["emit", "boundary_moment", "--input", "fn.json", "--out", "phi.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = read_csv(&dir.path().join("phi.csv"));
    assert_eq!(header, ["x", "phi_1", "phi_2"]);
    assert!(rows.iter().all(|r| (r[1] - 1.5f64.powi(2) / 4.0).abs() < 1e-14 && (r[2] - 0.0625).abs() < 1e-14));
}

#[test]
fn curvature_table_of_half_plane() {
    let dir = tempfile::tempdir().unwrap();
    let y: Vec<f64> = (0..40).map(|k| 0.5 * 1.002f64.powi(k)).collect();
    write(dir.path(), "hp.json", &json!({ "example": { "kind": "half_plane" }, "nx": 32, "y": y }));
    let o = run(&["emit", "curvature_table", "--input", "hp.json", "--out", "k.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = read_csv(&dir.path().join("k.csv"));
    assert_eq!(header, ["x", "y", "r1", "r2", "K", "multiplier"]);
    assert_eq!(rows.len(), 32 * 40);
    assert!(rows.iter().all(|r| (r[4] + 1.0).abs() < 1e-8), "K deviates");
    assert!(rows.iter().all(|r| r[5].abs() < 1e-8));
}
