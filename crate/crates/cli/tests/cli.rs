use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn brs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brs")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn validate_exit_codes() {
    let ok = brs(&["validate", &fixture("vending.brs")]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("atoms: 70"));
    assert!(stdout(&ok).lines().any(|l| l == "valid"));

    let bad = brs(&["validate", &fixture("cycle.brs")]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).lines().any(|l| l == "invalid"));

    let empty = brs(&["validate", &fixture("empty.brs")]);
    assert_eq!(empty.status.code(), Some(0));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(brs(&["react"]).status.code(), Some(2));
    assert_eq!(brs(&["validate", "/nonexistent.brs"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.brs");
    std::fs::write(&p, "brs 1\nagent bigraph { root { v nope } }\n").unwrap();
    let o = brs(&["validate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:"));
}

#[test]
fn react_all_one_step_both_paths() {
    for via in ["direct", "kernel"] {
        let o = brs(&["react", &fixture("vending.brs"), "--steps", "1", "--strategy", "all", "--via", via]);
        assert_eq!(o.status.code(), Some(0));
        let out = stdout(&o);
        assert!(out.contains("states: 3"), "{via}: {out}");
        assert!(out.contains("transitions: 2"), "{via}: {out}");
    }
    let zero = brs(&["react", &fixture("vending.brs"), "--steps", "0"]);
    assert!(stdout(&zero).contains("states: 1"));
}

#[test]
fn react_is_deterministic_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let o = brs(&[
            "react",
            &fixture("vending.brs"),
            "--strategy",
            "random",
            "--seed",
            "3",
            "--json",
            p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read_to_string(p).unwrap()
    };
    let a = run("a.json");
    assert_eq!(a, run("b.json"));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["format"], "brs-run 1");
    assert_eq!(v["outcome"], "quiescent");
}

#[test]
fn export_dot_and_atoms_round_trip() {
    let dot = stdout(&brs(&["export", &fixture("vending.brs"), "--format", "dot"]));
    assert_eq!(dot.matches("shape=ellipse").count(), 11);
    assert_eq!(dot.matches("shape=box,").count(), 1);
    assert_eq!(dot.matches("shape=plaintext").count(), 3);

    let dir = tempfile::tempdir().unwrap();
    let atoms = dir.path().join("v.atoms");
    let o = brs(&["export", &fixture("vending.brs"), "--format", "atoms", "-o", atoms.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&atoms).unwrap();
    assert!(text.starts_with("# brs-atoms 1"));

    let decoded = brs(&["decode", atoms.to_str().unwrap()]);
    assert_eq!(decoded.status.code(), Some(0));
    let spec = dir.path().join("again.brs");
    std::fs::write(
        &spec,
        format!("brs 1\nsignature {{ get: 1, send: 1, sum: 0 }}\nagent {}", stdout(&decoded)),
    )
    .unwrap();
    let again = stdout(&brs(&["export", spec.to_str().unwrap(), "--format", "atoms"]));
    assert_eq!(again, text);

    let trace = stdout(&brs(&["export", &fixture("vending.brs"), "--format", "trace-json"]));
    assert!(trace.lines().count() > 2);
}

#[test]
fn ccs_subcommand() {
    let o = brs(&["ccs", "a.0 | 'a.0", "--format", "atoms"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("is_node"));
    assert_eq!(brs(&["ccs", "a +"]).status.code(), Some(2));
}
