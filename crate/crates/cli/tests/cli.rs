use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn tourhom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tourhom")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_owned()
}

const CYCLIC: &str = "digraph 3\n0 1\n1 2\n2 0\n";

#[test]
fn hom_counts_and_enumeration() {
    let dir = TempDir::new().unwrap();
    let c3 = write(dir.path(), "c3.txt", CYCLIC);
    let o = tourhom(&["hom", "--pattern", &c3, "--host", &c3]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "3");

    let path3 = write(dir.path(), "path.txt", "digraph 3\nroots 0 1\n0 2\n2 1\n");
    let o = tourhom(&["hom", "--pattern", &path3, "--host", &c3, "--root-x", "1", "--root-y", "0"]);
    assert_eq!(stdout(&o).trim(), "1");
    let o = tourhom(&["hom", "--pattern", &path3, "--host", &c3, "--root-x", "0", "--root-y", "1"]);
    assert_eq!(stdout(&o).trim(), "0");

    let o = tourhom(&["hom", "--pattern", &c3, "--host", &c3, "--enumerate"]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 4);
    assert_eq!(out.lines().last(), Some("count 3"));
    let o = tourhom(&["hom", "--pattern", &c3, "--host", &c3, "--enumerate", "--cap", "2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let missing = path(dir.path(), "missing.txt");
    assert_eq!(code(&tourhom(&["hom", "--pattern", &missing, "--host", &missing])), 2);
    let bad = write(dir.path(), "bad.txt", "digraph 2\n0 1\n1 0\n");
    assert_eq!(code(&tourhom(&["check-f0", "--input", &bad])), 2);
    let big = write(
        dir.path(),
        "k8.txt",
        &format!("digraph 8\n{}", (0..8).flat_map(|u| (0..8).filter(move |&v| v != u).map(move |v| format!("{u} {v}\n"))).collect::<String>()),
    );
    let o = tourhom(&["hom", "--pattern", &big, "--host", &big, "--budget", "10"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn region_check_exit_codes() {
    let o = tourhom(&["region-check", "--x", "0.5", "--y", "0.25"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["in_region"], true);
    assert_eq!(code(&tourhom(&["region-check", "--x", "0.3", "--y", "0.35"])), 1);
    assert_eq!(code(&tourhom(&["region-check", "--x", "0.4", "--y", "0.14"])), 1);
    assert_eq!(code(&tourhom(&["region-check", "--x", "-0.1", "--y", "0.1"])), 1);
    assert_eq!(code(&tourhom(&["region-check", "--x", "NaN", "--y", "0.1"])), 2);
}

#[test]
fn base_tournament_commands() {
    let dir = TempDir::new().unwrap();
    let t5 = write(dir.path(), "t5.txt", "digraph 5\n0 1\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n");
    let o = tourhom(&["check-f0", "--input", &t5, "--a", "2", "--t3", "3"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("violated"));

    let f0 = path(dir.path(), "f0.txt");
    let o = tourhom(&["sample-f0", "--n", "36", "--seed", "1", "--out", &f0]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["n"], 36);
    let o = tourhom(&["check-f0", "--input", &f0]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["a"], 6);

    let o = tourhom(&["sample-f0", "--n", "3", "--a", "1", "--t3", "3", "--out", &f0, "--max-tries", "5"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn host_pipeline_on_single_edge() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let f0 = path(d, "f0.txt");
    assert_eq!(code(&tourhom(&["sample-f0", "--n", "36", "--seed", "1", "--out", &f0])), 0);
    let (f, fd) = (path(d, "f.txt"), path(d, "fd.txt"));
    let o = tourhom(&["build-gadget", "--f0", &f0, "--k", "29", "--out-f", &f, "--out-fdagger", &fd]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("F has 38 vertices, F-dagger has 74"));

    let edge = write(d, "edge.txt", "graph 2\n0 1\n");
    let (host, atlas) = (path(d, "host.txt"), path(d, "atlas.json"));
    let o = tourhom(&["build-host", "--graph", &edge, "--f0", &f0, "--m", "36", "--r", "1", "--out", &host, "--atlas", &atlas]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("host with 74 vertices, k = [29]"));

    let matrix = path(d, "m.csv");
    let o = tourhom(&["density-matrix", "--gadget", &fd, "--host", &host, "--atlas", &atlas, "--out", &matrix]);
    assert_eq!(code(&o), 0);
    let rep = json(&o);
    assert_eq!(rep["support"].as_array().unwrap().len(), 1);
    assert!(rep["violations"].as_array().unwrap().is_empty());

    // eigenvalues ±a give x = 1/2 and y = 1/4
    let o = tourhom(&["xy", "--matrix", &matrix]);
    assert_eq!(code(&o), 0);
    let p = json(&o);
    assert!((p["x"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((p["y"].as_f64().unwrap() - 0.25).abs() < 1e-12);
}

#[test]
fn reduce_and_evaluate() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let c3 = write(d, "c3.txt", CYCLIC);
    let fam = path(d, "family");
    let o = tourhom(&["build-gadget", "--f0", &c3, "--k", "2", "--out-dir", &fam]);
    assert_eq!(code(&o), 0);
    assert!(Path::new(&fam).join("fdagger_1.txt").exists());

    let o = tourhom(&["necklace", "--gadget", &path(Path::new(&fam), "fdagger_1.txt"), "--len", "4", "--out", &path(d, "d4.txt")]);
    assert!(stdout(&o).starts_with("necklace with 28 vertices"));

    let poly = write(d, "p.txt", "x1");
    let q = path(d, "f_of_p.json");
    let o = tourhom(&["reduce", "--poly", &poly, "--family", &fam, "--out", &q]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["clearing_exponents"], serde_json::json!([14]));
    assert_eq!(json(&o)["terms"], 3);
    let o = tourhom(&["reduce", "--poly", &poly, "--family", &fam, "--mode", "three-degree", "--out", &q]);
    assert_eq!(code(&o), 2);
    let o = tourhom(&["reduce", "--poly", &poly, "--family", &fam, "--mode", "explicit", "--e", "16", "--out", &q]);
    assert_eq!(code(&o), 0);

    let t5 = write(d, "t5.txt", "digraph 5\n0 1\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n");
    let o = tourhom(&["eval-quantum", "--quantum", &q, "--host", &t5]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["value"], "0/1");
}

#[test]
fn verify_writes_report() {
    let dir = TempDir::new().unwrap();
    let out = path(dir.path(), "report");
    let o = tourhom(&["verify", "--suite", "core", "--seed", "3", "--out", &out]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("PASS core"));
    let rep: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(Path::new(&out).join("report.json")).unwrap()).unwrap();
    assert_eq!(rep["passed"], true);
    assert_eq!(rep["config"]["seed"], 3);
}

#[test]
fn config_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "cfg.json", r#"{"seed": 1, "unknown_field": 2}"#);
    assert_eq!(code(&tourhom(&["verify", "--suite", "core", "--config", &cfg])), 2);
    let cfg = write(dir.path(), "zero.json", r#"{"budgets": {"wall_clock_secs": 0}}"#);
    assert_eq!(code(&tourhom(&["verify", "--suite", "claims", "--config", &cfg])), 2);
    let cfg = write(dir.path(), "budget.json", r#"{"budgets": {"node_budget": 10}}"#);
    let o = tourhom(&["verify", "--suite", "graphon", "--config", &cfg]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn small_convergence_run() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        r#"{"convergence": {"sizes": [16, 32], "r": [2], "cross_check": false, "small_cross_check": false}}"#,
    );
    let out = path(dir.path(), "conv");
    let o = tourhom(&["converge", "--config", &cfg, "--out", &out]);
    assert!(code(&o) == 0 || code(&o) == 1);
    let csv = std::fs::read_to_string(Path::new(&out).join("convergence_trend.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.starts_with("n,d,r,x,y"));
}
