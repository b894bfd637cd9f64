//! End-to-end runs of the `gralg` binary on builtin graphs.

use serde_json::Value;
use std::io::Write;
use std::path::Path;
use std::process::Command;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout)
            .unwrap_or_else(|e| panic!("{e}: {}\n{}", self.stdout, self.stderr))
    }
}

fn gralg_with_env(args: &[&str], env: &[(&str, &Path)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gralg"));
    cmd.args(args).env_remove("GRALG_CONFIG");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn gralg(args: &[&str]) -> Run {
    gralg_with_env(args, &[])
}

fn temp_json(v: &Value) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{v}").unwrap();
    f
}

fn path(f: &tempfile::NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

fn failed_checks(report: &Value) -> Vec<String> {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| format!("{}/{}", c["group"], c["name"]))
        .collect()
}

/// The report with every timing field removed.
fn without_timing(mut report: Value) -> Value {
    for c in report["checks"].as_array_mut().unwrap() {
        c.as_object_mut().unwrap().remove("timing_ms");
    }
    report
}

#[test]
fn full_suite_on_the_single_vertex_graph_passes() {
    let run = gralg(&[
        "suite",
        "all",
        "--graph",
        "single-vertex",
        "--n",
        "3",
        "--seed",
        "1",
    ]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    let r = run.json();
    assert_eq!(r["result"]["atoms"], 34);
    assert!(failed_checks(&r).is_empty());
    let groups: Vec<&str> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["group"].as_str().unwrap())
        .collect();
    for g in [
        "atoms",
        "ca",
        "pea",
        "discriminator",
        "canext",
        "ags",
        "game",
    ] {
        assert!(groups.contains(&g), "{g}");
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(gralg(&["graph", "chi", "K1", "--bogus"]).code, 2);
    assert_eq!(gralg(&["nonsense"]).code, 2);
    let run = gralg(&["graph", "chi", "K9"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("K9"));
    assert_eq!(gralg(&["--help"]).code, 0);
}

#[test]
fn injected_faults_exit_one_with_a_counterexample() {
    for args in [
        &[
            "bao",
            "check",
            "K2",
            "--axioms",
            "ca",
            "--inject-fault",
            "--samples",
            "500",
        ][..],
        &[
            "ags",
            "suite",
            "K1",
            "all",
            "--inject-fault",
            "--samples",
            "200",
        ][..],
        &[
            "dual",
            "lift",
            "P3",
            "K2",
            "--map",
            "0,1,0",
            "--inject-fault",
        ][..],
    ] {
        let run = gralg(args);
        assert_eq!(run.code, 1, "{args:?}: {}", run.stdout);
        let r = run.json();
        let bad = r["checks"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["status"] == "fail")
            .unwrap();
        assert!(bad["counterexample"].is_object(), "{bad}");
    }
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let args = [
        "bao",
        "check",
        "K1",
        "--axioms",
        "pea",
        "--samples",
        "300",
        "--seed",
        "5",
    ];
    let a = without_timing(gralg(&args).json());
    let b = without_timing(gralg(&args).json());
    assert_eq!(a, b);
    assert_eq!(a["config"]["seed"], 5);
    assert_eq!(a["argv"][0], "bao");
}

#[test]
fn graph_verbs() {
    let names = gralg(&["graph", "list"]).json();
    assert!(names["result"]
        .as_array()
        .unwrap()
        .contains(&"petersen".into()));
    let g = gralg(&["graph", "show", "grotzsch"]).json();
    assert_eq!(g["result"]["vertices"], 11);
    let dot = gralg(&["graph", "show", "C5", "--dot", "--output", "text"]);
    assert!(dot.stdout.contains("graph") && dot.stdout.contains("--"));
    let chi = gralg(&["graph", "chi", "petersen"]);
    assert_eq!(chi.code, 0);
    assert_eq!(chi.json()["result"]["chi"], 3);
    assert_eq!(
        gralg(&["graph", "girth", "petersen"]).json()["result"]["girth"],
        5
    );
    assert!(gralg(&["graph", "girth", "P4"]).json()["result"]["girth"].is_null());
    let k3 = gralg(&["graph", "inflate", "K1", "--n", "3"]).json();
    assert_eq!(k3["result"]["vertices"], 3);
    assert_eq!(k3["result"]["edges"].as_array().unwrap().len(), 3);
    let m = gralg(&["graph", "mycielski", "C5"]).json();
    assert_eq!(m["result"]["edges"].as_array().unwrap().len(), 20);
    let search = gralg(&[
        "graph", "search", "--girth", "4", "--chi", "4", "--seed", "1",
    ]);
    assert_eq!(search.code, 0, "{}", search.stdout);
    assert!(search.json()["result"]["chi"].as_u64().unwrap() >= 4);
    assert_eq!(
        gralg(&["graph", "search", "--girth", "2", "--chi", "4"]).code,
        2
    );
}

#[test]
fn graph_files_are_accepted_and_validated() {
    let tri = temp_json(&serde_json::json!({"vertices": 3, "edges": [[0, 1], [0, 2], [1, 2]]}));
    let r = gralg(&["graph", "chi", path(&tri)]).json();
    assert_eq!(r["result"]["chi"], 3);
    let bad = temp_json(&serde_json::json!({"vertices": 2, "edges": [[0, 5]]}));
    assert_eq!(gralg(&["graph", "chi", path(&bad)]).code, 2);
}

#[test]
fn atom_enumeration() {
    let r = gralg(&["atoms", "enumerate", "K2"]).json();
    assert_eq!(r["result"]["count"], 229);
    let atoms = r["result"]["atoms"].as_array().unwrap();
    assert_eq!(atoms.len(), 229);
    assert!(atoms[0]["sim"].is_array() && atoms[0]["K"].is_array());
    let count = gralg(&["atoms", "enumerate", "K1", "--count-only"]).json();
    assert_eq!(count["result"]["count"], 34);
    assert!(count["result"].get("atoms").is_none());
    let run = gralg(&["atoms", "enumerate", "C6"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("atom_bound"));
}

#[test]
fn algebra_verbs() {
    let b = gralg(&["bao", "build", "K1"]).json();
    assert_eq!(b["result"]["atoms"], 34);
    for args in [
        &["bao", "discriminator", "K1", "--samples", "500"][..],
        &["bao", "canext", "K1", "--samples", "200"][..],
        &["bao", "check", "P3", "--axioms", "ca", "--samples", "500"][..],
    ] {
        let run = gralg(args);
        assert_eq!(run.code, 0, "{args:?}: {}", run.stdout);
    }
    let mut eqs = tempfile::NamedTempFile::new().unwrap();
    writeln!(
        eqs,
        "# two laws\nE1: (c i (c i x)) = (c i x)\nE2: (s [1 1 2] (d 0 1)) = 1"
    )
    .unwrap();
    let run = gralg(&[
        "bao",
        "check",
        "K1",
        "--axioms",
        eqs.path().to_str().unwrap(),
    ]);
    assert_eq!(run.code, 0, "{}{}", run.stdout, run.stderr);
    assert_eq!(run.json()["summary"]["passed"], 2);
    let mut junk = tempfile::NamedTempFile::new().unwrap();
    writeln!(junk, "E1: (c i").unwrap();
    assert_eq!(
        gralg(&[
            "bao",
            "check",
            "K1",
            "--axioms",
            junk.path().to_str().unwrap()
        ])
        .code,
        2
    );
}

#[test]
fn model_verbs() {
    let b = gralg(&["ags", "build", "K1"]).json();
    assert_eq!(b["result"]["h_classes"], 3);
    let t = gralg(&["ags", "theta", "K2", "--k", "5"]);
    assert_eq!(t.code, 0);
    assert_eq!(t.json()["result"]["theta"], true);
    assert_eq!(
        gralg(&["ags", "theta", "K2", "--k", "6"]).json()["result"]["theta"],
        false
    );
    for which in ["rs", "proj", "subst", "model"] {
        let run = gralg(&["ags", "suite", "K1", which, "--samples", "300"]);
        assert_eq!(run.code, 0, "{which}: {}", run.stdout);
    }
}

#[test]
fn network_verbs() {
    let init = gralg(&["net", "initial", "K1"]).json();
    let file = temp_json(&init["result"]);
    assert_eq!(gralg(&["net", "validate", "K1", path(&file)]).code, 0);
    assert_eq!(gralg(&["net", "boundary", "K1", path(&file)]).code, 0);
    // a two-node network from the constructed strategy's first answer
    let two = serde_json::json!({"n": 3, "nodes": 2, "labels": [0, 1, 4, 7, 7, 4, 1, 0]});
    let two = temp_json(&two);
    assert_eq!(
        gralg(&["net", "validate", "K1", path(&two), "--mode", "cylindric"]).code,
        0
    );
    let b = gralg(&["net", "boundary", "K1", path(&two)]);
    assert_eq!(b.code, 0, "{}", b.stdout);
    assert!(b.json()["result"]["patches"].is_array());
    let broken =
        temp_json(&serde_json::json!({"n": 3, "nodes": 2, "labels": [0, 1, 4, 7, 7, 4, 1, 1]}));
    let run = gralg(&["net", "validate", "K1", path(&broken)]);
    assert_eq!(run.code, 1);
    assert!(run.json()["checks"][0]["counterexample"]["condition"].is_string());
    let short = temp_json(&serde_json::json!({"n": 3, "nodes": 2, "labels": [0]}));
    assert_eq!(gralg(&["net", "validate", "K1", path(&short)]).code, 2);
}

#[test]
fn game_verbs() {
    let run = gralg(&["game", "run", "K1", "--depth", "2"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert_eq!(run.json()["result"]["verdict"]["verdict"], "survives");
    let constructed = gralg(&[
        "game",
        "run",
        "K1",
        "--depth",
        "2",
        "--strategy",
        "constructed",
    ]);
    assert_eq!(constructed.code, 1);
    let cex = &constructed.json()["checks"][0]["counterexample"];
    assert_eq!(cex["verdict"], "precondition_failed");
    assert_eq!(cex["trace"].as_array().unwrap().len(), 2);
    let seeded = gralg(&[
        "game",
        "run",
        "K2",
        "--strategy",
        "paper",
        "--symmetry",
        "seeded",
    ]);
    assert_eq!(seeded.code, 0);
    let cyl = gralg(&[
        "game",
        "run",
        "K1",
        "--mode",
        "cylindric",
        "--moves",
        "elements",
    ]);
    assert_eq!(cyl.code, 0);
    let starved = gralg(&["game", "run", "K1", "--depth", "2", "--budget", "10"]);
    assert_eq!(starved.code, 2);
    assert!(starved.json()["incomplete"].is_string());
}

#[test]
fn duality_verbs() {
    let lift = gralg(&[
        "dual",
        "lift",
        "P3",
        "K2",
        "--map",
        "0,1,0",
        "--samples",
        "300",
    ]);
    assert_eq!(lift.code, 0, "{}", lift.stdout);
    let not_p = gralg(&["dual", "lift", "P3", "P3", "--map", "0,0,0"]);
    assert_eq!(not_p.code, 1);
    assert_eq!(gralg(&["dual", "lift", "P3", "K2", "--map", "0,1"]).code, 2);
    let chain = serde_json::json!({
        "stages": [
            {"vertices": 3, "edges": [[0, 1], [1, 2]]},
            {"vertices": 3, "edges": [[0, 1], [1, 2]]},
            {"vertices": 3, "edges": [[0, 1], [1, 2]]}
        ],
        "steps": [[0, 1, 2], [2, 1, 0]]
    });
    let file = temp_json(&chain);
    let run = gralg(&["dual", "check-chain", path(&file), "--samples", "200"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert_eq!(run.json()["result"].as_array().unwrap().len(), 3);
    let wraps = gralg(&[
        "dual",
        "check-chain",
        "--wraps",
        "3,1",
        "--atom-bound",
        "10000",
        "--samples",
        "200",
    ]);
    assert_eq!(wraps.code, 0, "{}", wraps.stdout);
    assert_eq!(wraps.json()["result"][1]["atoms"], 5671);
    assert_eq!(gralg(&["dual", "check-chain", "--wraps", "3,1"]).code, 2);
}

#[test]
fn config_layers_and_validation() {
    let env_file = temp_json(&serde_json::json!({"n": 4, "seed": 9}));
    let env = [("GRALG_CONFIG", env_file.path())];
    let r = gralg_with_env(&["graph", "list"], &env).json();
    assert_eq!(
        (r["config"]["n"].clone(), r["config"]["seed"].clone()),
        (4.into(), 9.into())
    );
    let explicit = temp_json(&serde_json::json!({"seed": 11, "output": "json"}));
    let r = gralg_with_env(&["graph", "list", "--config", path(&explicit)], &env).json();
    assert_eq!(
        (r["config"]["n"].clone(), r["config"]["seed"].clone()),
        (4.into(), 11.into())
    );
    let r = gralg_with_env(
        &["graph", "list", "--config", path(&explicit), "--seed", "2"],
        &env,
    )
    .json();
    assert_eq!(r["config"]["seed"], 2);
    let typo = temp_json(&serde_json::json!({"sample": 3}));
    let run = gralg(&["graph", "list", "--config", path(&typo)]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("sample"));
    let low = gralg(&["graph", "list", "--n", "2"]);
    assert_eq!(low.code, 2);
    assert!(low.stderr.contains("n:"));
    assert_eq!(gralg(&["graph", "list", "--atom-bound", "0"]).code, 2);
    let text = gralg(&["graph", "list", "--output", "text"]);
    assert!(text.stdout.starts_with("gralg "));
}
