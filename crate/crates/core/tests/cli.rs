use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixedbf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_file(p: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn verify_passes() {
    let o = run(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains(", 0 failed"));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn enumerate_two_cubic_vertices() {
    let o = run(&["enumerate"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# 2 connected graphs"), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("graph ")).count(), 2);
    assert!(text.contains("betti=1") && text.contains("betti=0"));
}

#[test]
fn cohomology_of_sl2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.json");
    let o = run(&["cohomology", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("weight-one trivial      true"));
    let v = json_file(&out);
    assert_eq!(v["trivial"], serde_json::json!([1, 0, 0, 1]));
    assert_eq!(v["weight_one_trivial"], serde_json::json!(true));
    assert_eq!(v["square_zero"], serde_json::json!(true));
}

#[test]
fn boundary_level_fit() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("level.json");
    let o = run(&[
        "boundary-level",
        "--L",
        "1e-3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let fit = &json_file(&out)["fits"][0];
    let c = (
        fit["c_an"][0].as_f64().unwrap(),
        fit["c_an"][1].as_f64().unwrap(),
    );
    assert!(c.0.is_finite() && c.1.is_finite() && (c.0 != 0.0 || c.1 != 0.0));
    assert!(fit["residual"].as_f64().unwrap() < 1e-2);
}

#[test]
fn sweep_writes_csv_with_manifest() {
    let o = run(&["sweep"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# manifest: {"));
    assert_eq!(
        lines.next().unwrap(),
        "epsilon,L,graph_id,value,error_estimate,value_imag"
    );
    assert_eq!(lines.count(), 4);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["nosuch"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(
        run(&["sweep", "--L", "1", "--epsilon-min", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "--config", "/nonexistent/run.toml"])
            .status
            .code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "unknown_key = 1\n").unwrap();
    assert_eq!(
        run(&["sweep", "--config", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let graph = dir.path().join("g.toml");
    std::fs::write(&graph, "graph = \"vertex 0 nosuch\"\n").unwrap();
    assert_eq!(
        run(&["sweep", "--config", graph.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn empty_config_runs_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.toml");
    std::fs::write(&empty, "").unwrap();
    let a = run(&["sweep", "--config", empty.to_str().unwrap()]);
    let b = run(&["sweep"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn manifest_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.json");
    let second = dir.path().join("b.json");
    let o = run(&[
        "anomaly",
        "--L",
        "0.5",
        "--epsilon-min",
        "5e-4",
        "--seed",
        "7",
        "--out",
        first.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let o = run(&[
        "anomaly",
        "--config",
        first.to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let (a, b) = (json_file(&first), json_file(&second));
    assert_eq!(a, b);
    assert_eq!(a["manifest"]["config"]["seed"], serde_json::json!(7));
}
