use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn subq(args: &[&str]) -> (bool, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_subq")).args(args).output().unwrap();
    (out.status.success(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (ok, stdout, stderr) = subq(args);
    assert!(ok, "{args:?}: {stderr}");
    serde_json::from_str(&stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn minimize_cut_minus_modular() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "f.json",
        r#"{"type":"add_modular","f":{"type":"cut","n":3,"arcs":[[1,2,1.0],[2,3,1.0]],"symmetric":true},"z":[-3.0,0.5,1.5]}"#,
    );
    let trace = dir.path().join("trace.csv");
    for algo in ["auto", "mnp", "brute_force"] {
        let v = json(&["minimize", "--f", &spec, "--algo", algo, "--trace", trace.to_str().unwrap()]);
        assert_eq!(v["minimizer"], serde_json::json!([1]), "{algo}");
        assert!((v["min_value"].as_f64().unwrap() + 2.0).abs() < 1e-9);
    }
    assert!(fs::read_to_string(&trace).unwrap().starts_with("iter,"));
    let (ok, _, stderr) = subq(&["minimize", "--f", &spec, "--algo", "newton"]);
    assert!(!ok && !stderr.is_empty());
}

#[test]
fn isotonic_and_maxflow() {
    let dir = tempfile::tempdir().unwrap();
    let z = write(dir.path(), "z.txt", "1\n3\n2\n");
    let cons = write(dir.path(), "c.txt", "1 2\n2 3\n");
    let out = dir.path().join("w.txt");
    let (ok, _, stderr) = subq(&["isotonic", "--z", &z, "--constraints", &cons, "--out", out.to_str().unwrap()]);
    assert!(ok, "{stderr}");
    let w: Vec<f64> = fs::read_to_string(&out).unwrap().lines().map(|l| l.parse().unwrap()).collect();
    assert!(w.iter().all(|v| (v - 2.0).abs() < 1e-9));
    let edges = write(dir.path(), "g.txt", "4 5\n1 2 3\n1 3 2\n2 3 1\n2 4 2\n3 4 3\n");
    let v = json(&["maxflow", "--edges", &edges, "--source", "1", "--sink", "4"]);
    assert!((v["value"].as_f64().unwrap() - 5.0).abs() < 1e-12);
    assert!(!subq(&["maxflow", "--edges", &edges, "--source", "1", "--sink", "1"]).0);
}

#[test]
fn maximize_and_prox() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "f.json", r#"{"type":"cover","p":3,"groups":[{"elements":[1,2],"weight":2.0},{"elements":[3],"weight":1.0}]}"#);
    let v = json(&["maximize", "--f", &spec, "--k", "2"]);
    assert!((v["value"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    let out = dir.path().join("prox");
    let (ok, _, stderr) = subq(&["prox", "--f", &spec, "--out", out.to_str().unwrap()]);
    assert!(ok, "{stderr}");
    let report: Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert!(report["gap"].as_f64().unwrap().abs() < 1e-8);
}

#[test]
fn generate_and_small_bench() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("chain.json");
    let (ok, _, stderr) = subq(&["generate", "--suite", "chain", "--out", spec.to_str().unwrap()]);
    assert!(ok, "{stderr}");
    let v = json(&["minimize", "--f", spec.to_str().unwrap()]);
    assert_eq!(v["converged"], Value::Bool(true));
    let out = dir.path().join("bench");
    let (ok, _, stderr) =
        subq(&["bench", "--suite", "chain", "--solvers", "mnp,sg", "--max-oracle", "5000", "--out", out.to_str().unwrap()]);
    assert!(ok, "{stderr}");
    for f in ["summary.json", "trace_chain100_mnp.csv", "trace_chain100_sg.csv", "instances/chain100.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
    assert!(!subq(&["bench", "--suite", "chain", "--solvers", "", "--out", out.to_str().unwrap()]).0);
}
