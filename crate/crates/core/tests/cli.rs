use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slice-regular")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

const ZSUM: &str = r#"{"builtin":"zsum"}"#;

fn window(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("window.json");
    std::fs::write(
        &path,
        r#"{"spheres":[
            {"x0":0.0,"y0":1.0,"k":1,"A":[[1,0,0,0],[0,0,0,0]],"q0_unit":[0,1,0,0]},
            {"x0":2.0,"y0":0.5,"k":2,"A":[[0,0,0,0],[1,0,0,0],[0,1,0,0],[0,0,0,0]],"q0_unit":[0,1,0,0]},
            {"x0":-3.0,"y0":1.5,"k":1,"A":[[0,0,1,0],[0,0,0,0]],"q0_unit":[0,0,1,0]},
            {"x0":4.2,"y0":0.0,"k":1,"A":[[2,0,0,0],[0,0,0,0]],"q0_unit":[0,1,0,0]},
            {"x0":0.5,"y0":4.0,"k":1,"A":[[0,0,0,1],[1,0,0,0]],"q0_unit":[0,1,0,0]}
        ]}"#,
    )
    .unwrap();
    path
}

#[test]
fn eval_lattice_sum_on_the_real_axis() {
    let v = json(&run(&["eval", ZSUM, "0.5", "--eps", "1e-10"]));
    let value = v["value"][0].as_f64().unwrap();
    assert!(v["bound"].as_f64().unwrap() <= 1e-9);
    // π·sinh(2π)/(cosh(2π) - cos(π)) at x = 1/2
    let pi = std::f64::consts::PI;
    let want = pi * (2.0 * pi).sinh() / ((2.0 * pi).cosh() - pi.cos());
    assert!((value - want).abs() < 1e-9, "{value} vs {want}");
}

#[test]
fn eval_at_a_pole_names_the_sphere() {
    let out = run(&["eval", ZSUM, "1+j"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error[pole]:") && err.contains("1+1S"), "{err}");
}

#[test]
fn eval_of_a_constant_polynomial() {
    let v = json(&run(&["eval", r#"{"coeffs":[[1,0,-2,0]]}"#, "3+4k"]));
    assert_eq!(v["value"], serde_json::json!([1.0, 0.0, -2.0, 0.0]));
    assert!(v["bound"].is_null());
}

#[test]
fn bad_input_is_reported() {
    let out = run(&["eval", ZSUM, "1+q"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[parse]:"));
}

#[test]
fn expand_and_principal_part() {
    let rational = r#"{"num":{"coeffs":[[1,0,0,0],[0,0,1,0]]},"den":[{"type":"sphere","x0":1.0,"y0":1.0,"power":2}]}"#;
    let v = json(&run(&["expand", rational, "--sphere", "1,1", "--order", "6"]));
    assert_eq!(v["k"], 2);
    assert_eq!(v["A"].as_array().unwrap().len(), 7);
    let v = json(&run(&["principal-part", rational, "--sphere", "1,1", "--unit", "j"]));
    assert_eq!(v["principal"]["k"], 2);
}

#[test]
fn ml_build_window_and_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let art = dir.path().join("art.json");
    let v = json(&run(&["ml-build", window(dir.path()).to_str().unwrap(), "--out", art.to_str().unwrap()]));
    assert_eq!(v["complete"], true);
    let ledger = v["ledger"].as_array().unwrap();
    assert_eq!(ledger.len(), 4);
    for row in ledger {
        assert!(row["bound"].as_f64().unwrap() < 0.5f64.powi(row["n"].as_i64().unwrap() as i32));
    }
    let v = json(&run(&["principal-part", art.to_str().unwrap(), "--sphere", "2,0.5"]));
    assert_eq!(v["principal"]["k"], 2);

    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, r#"{"spheres":[]}"#).unwrap();
    let out_empty = dir.path().join("empty-art.json");
    let v = json(&run(&["ml-build", empty.to_str().unwrap(), "--out", out_empty.to_str().unwrap()]));
    assert_eq!(v["ledger"].as_array().unwrap().len(), 0);
    let v = json(&run(&["eval", out_empty.to_str().unwrap(), "1+i"]));
    assert_eq!(v["value"], serde_json::json!([0.0, 0.0, 0.0, 0.0]));

    // spheres accumulating at 1 + 𝕊
    let parts: Vec<String> = (1..=80)
        .map(|n| format!(r#"{{"x0":1.0,"y0":{},"k":1,"A":[[1,0,0,0],[0,0,0,0]],"q0_unit":[0,1,0,0]}}"#, 1.0 + 1.0 / n as f64))
        .collect();
    let acc = dir.path().join("acc.json");
    std::fs::write(&acc, format!(r#"{{"spheres":[{}]}}"#, parts.join(","))).unwrap();
    let out = run(&["ml-build", acc.to_str().unwrap(), "--out", dir.path().join("x.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[discreteness]:"));
}

#[test]
fn grid_is_byte_stable() {
    let args = ["grid", ZSUM, "--unit", "j", "--x", "-1,1", "--y", "0,0.5", "--nx", "2", "--ny", "2"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "x,y,f0,f1,f2,f3,abs");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert!(run(&with_out).status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap().trim_end(), text.trim_end());
}

#[test]
fn verify_accepts_regular_and_rejects_conjugate() {
    let small = ["--points", "20", "--spheres", "3"];
    let mut args = vec!["verify", ZSUM];
    args.extend(small);
    assert_eq!(json(&run(&args))["pass"], true);

    let out = run(&["verify", r#"{"builtin":"conjugate"}"#, "--points", "5", "--spheres", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], false);
    assert_eq!(v["regularity"]["failures"], 5);

    let dir = tempfile::tempdir().unwrap();
    let art = dir.path().join("art.json");
    assert!(run(&["ml-build", window(dir.path()).to_str().unwrap(), "--out", art.to_str().unwrap()]).status.success());
    let mut args = vec!["verify", art.to_str().unwrap()];
    args.extend(small);
    let v = json(&run(&args));
    assert_eq!(v["pass"], true, "{v:#}");
}
