use std::path::Path;
use std::process::{Command, Output};

fn octsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_octsum"))
        .args(args)
        .env_remove("OCTSUM_MAX")
        .env_remove("OCTSUM_CACHE")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_reports_the_missing_value() {
    let o = octsum(&["classify", "--coeffs", "1,1,2,14"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "not-universal(60)");
    let o = octsum(&["classify", "--coeffs", "1,2,3,7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "universal");
}

#[test]
fn truant_and_represent() {
    let o = octsum(&["truant", "--coeffs", "1,2", "--max", "100"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "4");
    let o = octsum(&["represent", "--coeffs", "1", "--n", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "not represented");
    let o = octsum(&["represent", "--coeffs", "1,1,3,3", "--n", "8", "--witness"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "represented: x = (0,-1,0,1)");
}

#[test]
fn small_commands() {
    assert_eq!(stdout(&octsum(&["p8", "-3"])).trim(), "33");
    let vals = stdout(&octsum(&["values", "--max", "40"]));
    assert_eq!(
        vals.split_whitespace().collect::<Vec<_>>(),
        ["0", "1", "5", "8", "16", "21", "33", "40"]
    );
    assert_eq!(
        stdout(&octsum(&[
            "exceptions",
            "--coeffs",
            "1,1,3,4",
            "--max",
            "1000"
        ]))
        .trim(),
        "18"
    );
    assert_eq!(
        stdout(&octsum(&[
            "exceptions",
            "--coeffs",
            "1,1,3,3",
            "--max",
            "1000"
        ]))
        .trim(),
        "none"
    );
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        octsum(&["represent", "--coeffs", "1,x", "--n", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        octsum(&["truant", "--coeffs", "0,1", "--max", "10"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(octsum(&["values", "--max", "-5"]).status.code(), Some(2));
    assert_eq!(
        octsum(&["verify", "--theorem", "T9.9", "--max", "10"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(octsum(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn escalate_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tree.json");
    let o = octsum(&[
        "escalate",
        "--depth",
        "3",
        "--max",
        "1000",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(1,1,2) truant 14"));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["max_depth"], 3);
}

#[test]
fn verify_writes_deterministic_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = octsum(&[
            "verify",
            "--theorem",
            "L3.2",
            "--max",
            "1000",
            "--cert",
            p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("exceptions {60}"));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn verify_all_with_cache() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("certs");
    let cache = dir.path().join("cache.json");
    let args = [
        "--cache",
        cache.to_str().unwrap(),
        "verify-all",
        "--max",
        "500",
        "--out",
        out.to_str().unwrap(),
    ];
    let o = octsum(&args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(stdout(&o).lines().count(), 17);
    assert!(Path::new(&cache).exists());
    assert!(out.join("T3.1.json").exists() && out.join("L3.5-14.json").exists());
    let first = std::fs::read(out.join("T2.1.json")).unwrap();
    assert_eq!(octsum(&args).status.code(), Some(0));
    assert_eq!(std::fs::read(out.join("T2.1.json")).unwrap(), first);
}

#[test]
fn default_bound_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_octsum"))
        .args(["values"])
        .env("OCTSUM_MAX", "8")
        .output()
        .unwrap();
    assert_eq!(
        stdout(&o).split_whitespace().collect::<Vec<_>>(),
        ["0", "1", "5", "8"]
    );
}
