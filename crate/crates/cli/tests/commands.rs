use std::path::PathBuf;
use std::process::{Command, Output};

fn chern(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chern")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("chern-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn sample_records() -> String {
    format!("{}/../core/data/sample_records.json", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn compute_examples() {
    let o = chern(&["compute", "--variety", "P4", "--expr", "Tp(h1)", "--mod", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "h1 + h1^2 + h1^4");

    let o = chern(&["compute", "--variety", "P2", "--expr", "chh(OL(2))"]);
    assert_eq!(stdout(&o).trim(), "ch_2 = 1\nch_1 = 3/2*h1\nch_0 = h1^2");

    let o = chern(&["compute", "--variety", "P0", "--expr", "1"]);
    assert_eq!((code(&o), stdout(&o).trim().to_string()), (0, "1".to_string()));

    let o = chern(&["compute", "--variety", "P2xP1", "--expr", "psi(2, OL(1,0))", "--context", "k"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn compute_formats() {
    let o = chern(&["--format", "json", "compute", "--variety", "P2", "--expr", "td(3*O(1) - O(0))"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kind"], "chow");
    assert_eq!(v["value"]["variety"], "P2");
    let o = chern(&["compute", "--variety", "P2", "--expr", "td(3*O(1) - O(0))", "--format", "csv"]);
    assert_eq!(stdout(&o).trim(), "dim,term,coefficient\n,1,1\n,h1,3/2\n,h1^2,1");
}

#[test]
fn compute_errors_exit_2() {
    let o = chern(&["compute", "--variety", "P2", "--expr", "O(1"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("offset 3"));
    assert_eq!(code(&chern(&["compute", "--variety", "P2", "--expr", "h1", "--context", "k"])), 2);
    assert_eq!(code(&chern(&["compute", "--variety", "P2", "--expr", "S(h1)"])), 2);
    assert_eq!(code(&chern(&["compute", "--variety", "Q2", "--expr", "1"])), 2);
}

#[test]
fn tables() {
    let o = chern(&["table", "todd-numbers", "--max", "4", "--format", "csv"]);
    assert_eq!(stdout(&o).trim(), "d,tau\n0,1\n1,2\n2,12\n3,24\n4,720");
    let o = chern(&["table", "todd-series", "--max-deg", "4", "--format", "csv"]);
    assert_eq!(stdout(&o).trim(), "degree,coefficient\n0,1\n1,1/2\n2,1/12\n3,0\n4,-1/720");
    let o = chern(&["table", "r-series", "--p", "3", "--max-deg", "8", "--format", "csv"]);
    assert_eq!(stdout(&o).trim(), "exponent,sign,residue\n0,+,1\n2,-,2\n8,+,1");
    assert_eq!(code(&chern(&["table", "r-series", "--max-deg", "8"])), 2);
    assert_eq!(code(&chern(&["table", "r-series", "--p", "4"])), 2);
}

#[test]
fn verify_exit_codes() {
    let o = chern(&["verify", "inv-series", "--p", "2", "--order", "16"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("inv-series: ok"));
    assert_eq!(code(&chern(&["verify", "mainvp", "--p", "2", "--variety", "P2xP2"])), 0);
    assert_eq!(code(&chern(&["verify", "nonsense"])), 2);
    assert_eq!(code(&chern(&["verify", "inv-series", "--l", "3"])), 2);
    assert_eq!(code(&chern(&["verify", "--records", "x.json"])), 2);
    let o = chern(&["verify", "degf", "--records", &sample_records()]);
    assert_eq!(code(&o), 1, "the sample file holds one inconsistent record");
    assert_eq!(code(&chern(&["verify", "degf"])), 0);
}

#[test]
fn verify_json_report_shape() {
    let o = chern(&["verify", "chpsi", "--variety", "P2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["check", "params", "cases", "failures", "status", "seed"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["status"], "ok");
    assert!(v.get("elapsed_ms").is_none());
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "well-defined", "--p", "3", "--variety", "P2xP1", "--samples", "30", "--seed", "7", "--format", "json"];
    let a = chern(&args);
    let b = chern(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = chern(&["verify", "well-defined", "--p", "3", "--variety", "P2xP1", "--samples", "30", "--seed", "8", "--format", "json"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn quiet_suppresses_output() {
    let o = chern(&["--quiet", "verify", "inv-series", "--p", "3"]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
}

#[test]
fn degree_command() {
    let o = chern(&["degree", &sample_records()]);
    assert_eq!(code(&o), 1);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].contains("strongly p-incompressible"));
    assert!(lines[1].contains(": consistent"));
    assert!(lines[2].contains("VIOLATES"));

    let sb = temp_file("sb.json", r#"{"varieties": [{"name": "sb", "dim": 2, "chi": 1, "index": 3},
        {"name": "sb2", "dim": "2", "chi": "1", "index": "3"}],
        "morphisms": [{"source": "sb2", "target": "sb", "deg": 4}]}"#);
    let o = chern(&["degree", sb.to_str().unwrap(), "--p", "3", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["verdict"], "strongly p-incompressible");
    assert_eq!(v[2]["verdict"], "consistent");
    assert!(v[2]["reference"].as_str().unwrap().contains("deg f"));

    let bad = temp_file("violates.json", r#"{"varieties": [{"name": "x", "dim": 1, "chi": 1, "index": 4}]}"#);
    let o = chern(&["degree", bad.to_str().unwrap(), "--p", "2"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("VIOLATES"));

    let empty = temp_file("empty.json", "");
    let o = chern(&["degree", empty.to_str().unwrap()]);
    assert_eq!((code(&o), o.stdout.len()), (0, 0));

    let broken = temp_file("broken.json", "{\"varieties\": [");
    let o = chern(&["degree", broken.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("broken.json"));
    assert_eq!(code(&chern(&["degree", "/nonexistent/records.json"])), 2);
}
