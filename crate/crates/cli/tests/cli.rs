use std::process::{Command, Output};

fn molkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_molkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn modular_lattice_passes() {
    let o = molkit(&["lattice", "check", "mo:3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pass         orthomodular"));
}

#[test]
fn benzene_fails_with_witness() {
    let o = molkit(&["lattice", "check", "o6"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("modularity fails"));
}

#[test]
fn usage_error_exits_two() {
    assert_eq!(molkit(&["lattice", "frobnicate"]).status.code(), Some(2));
    assert_eq!(
        molkit(&["lattice", "check", "nope:3"]).status.code(),
        Some(2)
    );
}

#[test]
fn generating_frame_verifies() {
    let o = molkit(&["witness", "m2", "--k", "2", "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn identity_in_finite_and_sampled_models() {
    let o = molkit(&["term", "check", "--model", "mo:2", "(= (* x (+ x y)) x)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("command:"));
    assert!(stdout(&o).contains("pass "));

    let o = molkit(&[
        "--seed",
        "7",
        "term",
        "check",
        "--model",
        "space:identity:3",
        "--samples",
        "10",
        "(= (* x (+ x y)) x)",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("inconclusive"));
}

#[test]
fn distributivity_fails_in_mo2() {
    let o = molkit(&[
        "term",
        "check",
        "--model",
        "mo:2",
        "(= (* x (+ y z)) (+ (* x y) (* x z)))",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn ring_ops_agree_with_matrices() {
    for (op, args) in [
        ("add", vec!["1 2; 3 4", "0 1; 1 0"]),
        ("mul", vec!["1 2; 3 4", "0 1; 1 0"]),
        ("inv", vec!["2 1; 1 1"]),
    ] {
        let mut argv = vec!["frame", "ring-op", "--frame", "3:2", "--op", op, "--args"];
        argv.extend(args);
        let o = molkit(&argv);
        assert_eq!(o.status.code(), Some(0), "{op}: {}", stdout(&o));
    }
    let o = molkit(&[
        "frame",
        "ring-op",
        "--op",
        "star",
        "--form",
        "diag:1,2,1",
        "--args",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn json_report_parses() {
    let o = molkit(&["--json", "lattice", "check", "bool:2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["checks"].as_array().unwrap().len(), 4);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["status"] == "pass"));
}

#[test]
fn corpus_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = molkit(&["corpus", "--out", out, "mo:3", "prod:mo:2,bool:1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let file = dir.path().join("prod_mo_2_bool_1.lat");
    assert!(file.is_file());
    let o = molkit(&["lattice", "decompose", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("MO_2"));
}

#[test]
fn subspace_files() {
    let dir = tempfile::tempdir().unwrap();
    let u = dir.path().join("u.txt");
    let o = molkit(&["corpus", "mo:2"]);
    assert!(stdout(&o).contains("elements: 6"));
    // Line spanned by (1,1,0) in Q^3.
    let text = "ambient 3\n1 3\n1 1 0\n";
    std::fs::write(&u, text).unwrap();
    let o = molkit(&[
        "space",
        "ortho",
        "--form",
        "diag:1,2,1",
        "--in",
        u.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = molkit(&["witness", "double", "--in", u.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn timing_only_on_request() {
    assert!(!stdout(&molkit(&["lattice", "si", "mo:3"])).contains("timing:"));
    assert!(stdout(&molkit(&["--timing", "lattice", "si", "mo:3"])).contains("timing:"));
}

#[test]
fn translation_agrees_and_checks_its_assumption() {
    let o = molkit(&[
        "term",
        "translate",
        "(= (+ (* x y) (* x z)) (* x (+ y z)))",
        "--model",
        "mo:2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("identity holds: false"));
    let o = molkit(&[
        "term",
        "translate",
        "(= (* x (+ y z)) (+ (* x y) (* x z)))",
        "--model",
        "mo:2",
    ]);
    assert_eq!(o.status.code(), Some(1));
}
