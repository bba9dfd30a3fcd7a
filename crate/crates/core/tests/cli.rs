use std::f64::consts::PI;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fresnel-tomo"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(text: &[u8]) -> serde_json::Value {
    serde_json::from_slice(text).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(text)))
}

/// Summary goes to stderr when data goes to stdout.
fn summary(o: &Output) -> serde_json::Value {
    let err = String::from_utf8_lossy(&o.stderr);
    let line = err.lines().rev().find(|l| l.starts_with('{')).expect("a JSON summary line");
    json(line.as_bytes())
}

#[test]
fn wigner_of_vacuum_and_fock_one() {
    let o = run(&["wigner", "--state", "vacuum", "--grid", "7,129", "--json"]);
    assert_eq!(code(&o), 0);
    let s = summary(&o);
    assert!((s["max"].as_f64().unwrap() - 1.0 / PI).abs() < 1e-6);
    let csv = String::from_utf8(o.stdout).unwrap();
    assert_eq!(csv.lines().next(), Some("x,p,W"));
    assert_eq!(csv.lines().count(), 1 + 129 * 129);

    let o = run(&["wigner", "--state", "fock:1", "--grid", "7,129", "--json"]);
    assert_eq!(code(&o), 0);
    assert!((summary(&o)["min"].as_f64().unwrap() + 1.0 / PI).abs() < 1e-6);
}

#[test]
fn wigner_to_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("w.csv");
    let bin = dir.path().join("w.bin");
    for out in [&csv, &bin] {
        let o = run(&["wigner", "--state", "cat:1", "--grid", "7,65", "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = fresnel_tomo::io::read_wigner_csv(std::fs::File::open(&csv).unwrap()).unwrap();
    let b = fresnel_tomo::io::read_wigner_binary(&bin).unwrap();
    assert_eq!(a, b);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["wigner"],
        vec!["wigner", "--state", "thermal:1"],
        vec!["tomogram", "--state", "vacuum", "--matrix", "1,0,0,2"],
        vec!["tomogram", "--state", "vacuum"],
        vec!["wigner", "--state", "vacuum", "--grid", "7"],
        vec!["reconstruct", "--state", "vacuum", "--angles", "4"],
        vec!["compose", "1,1,1,1"],
        vec!["fresnel-apply", "--state", "vacuum", "--elementary", "free:1", "--route", "sideways"],
        vec!["no-such-command"],
    ] {
        let o = run(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn tomogram_routes_agree() {
    let o = run(&[
        "tomogram", "--state", "coherent:0.5,0.3", "--matrix", "1,0.8,-0.5,0.6", "--route", "both", "--json",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(&o);
    assert!(s["max_deviation"].as_f64().unwrap() <= 1e-5);
    assert!(String::from_utf8(o.stdout).unwrap().contains("# max_deviation="));
}

#[test]
fn rotated_coherent_tomogram_mean() {
    // D X - B P for rotation(pi/4) on alpha = 1: sqrt2 cos(pi/4) = 1
    let o = run(&["tomogram", "--state", "coherent:1", "--elementary", "rotation:0.7853981633974483", "--json"]);
    assert_eq!(code(&o), 0);
    let s = summary(&o);
    assert!((s["mean"].as_f64().unwrap() - 1.0).abs() < 1e-6, "{s}");
    assert!((s["variance"].as_f64().unwrap() - 0.5).abs() < 1e-6, "{s}");
}

#[test]
fn compose_checks_the_chart() {
    let o = run(&["compose", "--json", "rotation:0.5", "free:0.3", "abcd:-1,0,0,-1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = json(&o.stdout);
    let m: Vec<f64> = s["matrix"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    let (c, sn) = (0.5f64.cos(), 0.5f64.sin());
    let want = [-c, -0.3 * c - sn, sn, 0.3 * sn - c];
    for (a, b) in m.iter().zip(want) {
        assert!((a - b).abs() < 1e-14);
    }
    assert!(s["chart_mismatch"].as_f64().unwrap() < 1e-10);
}

#[test]
fn fresnel_apply_writes_fock_vectors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    let o = run(&[
        "fresnel-apply", "--state", "vacuum", "--elementary", "rotation:1", "--fock", "--fock-dim", "16",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: fresnel_tomo::FockVector = fresnel_tomo::io::read_json(std::fs::File::open(&out).unwrap()).unwrap();
    assert_eq!(v.dim(), 16);
    // F|0> = e^{-i/2}|0>, up to sign
    assert!((v.as_slice()[0].norm() - 1.0).abs() < 1e-12);
    assert!((v.as_slice()[0].arg().abs() - 0.5).abs() < 1e-12 || (v.as_slice()[0].arg().abs() - (PI - 0.5)).abs() < 1e-12);
}

#[test]
fn radon_sinogram_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sino");
    let o = run(&["radon", "--state", "vacuum", "--grid", "6,65", "--angles", "6", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let curves = fresnel_tomo::io::read_sinogram(&out).unwrap();
    assert_eq!(curves.len(), 6);
}

#[test]
fn reconstruct_vacuum() {
    let o = run(&["reconstruct", "--state", "vacuum", "--angles", "90", "--tolerance", "1e-2", "--json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn outputs_are_reproducible() {
    let args = ["tomogram", "--state", "cat:1.5", "--elementary", "lens:0.4", "--grid", "8,257"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_degraded_and_seeded() {
    let args = ["verify", "--fock-dim", "8", "--matrices", "1", "--grid", "6,129", "--seed", "3", "--json"];
    let a = run(&args);
    // a dimension of 8 cannot meet the group-law tolerance
    assert_eq!(code(&a), 1);
    let report = json(&a.stdout);
    let checks = report["checks"].as_array().unwrap();
    let group = checks.iter().find(|c| c["check"] == "group_law").unwrap();
    assert_eq!(group["degraded"], true);
    assert_eq!(group["pass"], false);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
}
