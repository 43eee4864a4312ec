use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_theta-epsa"));
    c.env_remove("THETA_EPSA_BUDGET");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

const K4: &str = "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";

#[test]
fn oracle_on_k4() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k4.txt", K4);
    let out = run(&["oracle", "--r", "2", g.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!((v["nu_e"].as_u64(), v["tau_e"].as_u64()), (Some(1), Some(3)));
    assert_eq!((v["nu"].as_u64(), v["tau"].as_u64()), (Some(1), Some(2)));
    assert!(!out.stderr.is_empty(), "summary goes to standard error");
}

#[test]
fn pipeline_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k4.txt", K4);
    let cert = dir.path().join("cert.json");
    let out = run(&["pipeline", "--k", "1", "--r", "3", g.to_str().unwrap(), "--out", cert.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(v["branch"], "packing");
    assert_eq!(v["certificates"].as_array().unwrap().len(), 1);

    let out = run(&["verify", cert.to_str().unwrap(), g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    // a single certificate and an array of certificates also verify
    let single = write(dir.path(), "one.json", &v["certificates"][0].to_string());
    assert!(run(&["verify", single.to_str().unwrap(), g.to_str().unwrap()]).status.success());
    let list = write(dir.path(), "list.json", &v["certificates"].to_string());
    assert!(run(&["verify", list.to_str().unwrap(), g.to_str().unwrap()]).status.success());
}

#[test]
fn cover_outputs_verify_and_tampering_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k4.txt", K4);
    for args in [
        vec!["pipeline", "--k", "2", "--r", "2"],
        vec!["cover", "--r", "2"],
        vec!["cover", "--r", "2", "--method", "recursive"],
    ] {
        let mut a = args.clone();
        a.push(g.to_str().unwrap());
        let out = run(&a);
        assert!(out.status.success(), "{args:?}");
        let file = write(dir.path(), "cover.json", std::str::from_utf8(&out.stdout).unwrap());
        assert!(run(&["verify", file.to_str().unwrap(), g.to_str().unwrap()]).status.success());
    }
    let bad = write(dir.path(), "bad.json", r#"{"r": 2, "edges": [0]}"#);
    let out = run(&["verify", bad.to_str().unwrap(), g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json(&out)["valid"], false);

    let forged = write(
        dir.path(),
        "forged.json",
        r#"{"r":3,"part1":[0],"part2":[1],"inner1":[],"inner2":[],"cross":[0,1,2]}"#,
    );
    assert_eq!(run(&["verify", forged.to_str().unwrap(), g.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let loop_graph = write(dir.path(), "loop.txt", "0 0\n");
    assert_eq!(run(&["oracle", "--r", "2", loop_graph.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["oracle", "--r", "2", "/nonexistent/graph"]).status.code(), Some(2));

    let g = write(dir.path(), "k4.txt", K4);
    let small = ["--budget-vertices", "2", "--budget-edges", "2"];
    let mut args = vec!["oracle", "--r", "2", g.to_str().unwrap()];
    args.extend(small);
    assert_eq!(run(&args).status.code(), Some(3));

    let out = bin()
        .env("THETA_EPSA_BUDGET", "2,2")
        .args(["oracle", "--r", "2", g.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    // flags override the environment
    let out = bin()
        .env("THETA_EPSA_BUDGET", "2,2")
        .args(["oracle", "--r", "2", "--budget-vertices", "12", g.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = bin()
        .env("THETA_EPSA_BUDGET", "twelve")
        .args(["oracle", "--r", "2", g.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(&["oracle", "--r", "1", g.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn generators() {
    let parse = |out: Output| theta_epsa::MultiGraph::parse(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let t = parse(run(&["generate", "theta", "--r", "5"]));
    assert_eq!((t.vertex_count(), t.edge_count()), (2, 5));
    let w = parse(run(&["generate", "wheel", "--n", "6"]));
    assert_eq!(w.degree(0), 6);
    let a = run(&["generate", "random-biconnected", "--n", "10", "--seed", "7"]);
    let b = run(&["generate", "random-biconnected", "--n", "10", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let g = parse(a);
    assert_eq!(g.biconnected_components().len(), 1);
    let wall = parse(run(&["generate", "wall", "--height", "3", "--width", "3"]));
    assert!(wall.max_degree() <= 3);
    assert_eq!(run(&["generate", "cycle"]).status.code(), Some(2));
}

#[test]
fn pack_and_gap_and_decompose() {
    let dir = tempfile::tempdir().unwrap();
    let wheel = run(&["generate", "wheel", "--n", "4"]);
    let g = write(dir.path(), "w4.txt", std::str::from_utf8(&wheel.stdout).unwrap());
    let out = run(&["pack", "--k", "1", "--r", "2", "--high-degree", g.to_str().unwrap()]);
    assert!(out.status.success());
    let file = write(dir.path(), "pack.json", std::str::from_utf8(&out.stdout).unwrap());
    assert!(run(&["verify", file.to_str().unwrap(), g.to_str().unwrap()]).status.success());
    let out = run(&["pack", "--k", "9", "--r", "2", g.to_str().unwrap()]);
    assert_eq!(json(&out)["found"], false);

    let k4 = write(dir.path(), "k4.txt", K4);
    let out = run(&["gap", "--r", "2", k4.to_str().unwrap(), g.to_str().unwrap()]);
    let v = json(&out);
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[0]["k_packed"], 1);
    assert_eq!(v[0]["bound_params"]["variant"], "quadratic-in-k");
    let out = run(&["gap", "--r", "2", "--csv", "--variant", "quartic-in-k", k4.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("graph,r,k_packed"));

    let out = run(&["decompose", "--nice", k4.to_str().unwrap()]);
    let v = json(&out);
    assert_eq!(v["width"], 3);
    assert!(v["decomposition"]["root"].is_number());
}
