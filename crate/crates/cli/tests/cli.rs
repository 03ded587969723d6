use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smoothpoly")).args(args).output().expect("binary runs")
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn bound_gamma_at_one() {
    let out = run(&["bound", "--d", "2", "--g", "1", "--u", "1"]);
    assert!(out.status.success());
    let recs = json_lines(&out);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["result"]["gamma"].as_f64().unwrap(), 0.913967211436);
    assert_eq!(recs[0]["command"], "bound");
    assert!(recs[0]["version"].is_string());
    assert_eq!(recs[0]["config"]["d"], 2);
}

#[test]
fn rb_dump_records() {
    let out = run(&["rb", "--b", "1", "--x", "10", "--dump"]);
    assert!(out.status.success());
    let recs = json_lines(&out);
    assert_eq!(recs.len(), 11);
    assert_eq!(recs[0]["result"]["count"], 7);
    let flags: Vec<bool> = recs[1..].iter().map(|r| r["has_primitive"].as_bool().unwrap()).collect();
    assert_eq!(flags, [true, true, false, true, true, true, false, false, true, true]);
}

#[test]
fn negative_b_parses() {
    let out = run(&["rb", "--b", "-2", "--x", "20"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json_lines(&out)[0]["result"]["b"], -2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["rb", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["psi", "--poly", "t^2+1", "--x", "10"]).status.code(), Some(2));
    assert_eq!(run(&["calpha", "--m", "2", "--window", "5"]).status.code(), Some(2));
    assert_eq!(run(&["nosuch"]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_one() {
    let out = run(&["rb", "--b", "-4", "--x", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    assert_eq!(run(&["calpha", "--m", "4", "--x", "10"]).status.code(), Some(1));
    assert_eq!(run(&["dickman", "--u", "-1"]).status.code(), Some(1));
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["psi", "--factors", "[\"t\",\"t^2+1\"]", "--x", "20000", "--y", "50", "--dump"];
    let one = run(&[&args[..], &["--threads", "1"]].concat());
    let four = run(&[&args[..], &["--threads", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn csv_has_header_and_rows() {
    let out = run(&["dickman", "--u", "1", "--u", "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].split(',').any(|h| h == "result.rho"));
    // The u list is a quoted JSON array, so it survives as one field.
    assert!(lines[1].contains("\"[1.0,2.0]\""));
    assert!(lines[2].contains(",0.30685281944,"));
}

#[test]
fn schema_needs_only_the_subcommand() {
    let out = run(&["calpha", "--schema"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["command"], "calpha");
    assert!(v["columns"]["count"].is_string());
}

#[test]
fn seeded_random_moduli_repeat() {
    let a = run(&["omega", "--poly", "t^2+1", "--random", "5", "--seed", "11"]);
    let b = run(&["omega", "--poly", "t^2+1", "--random", "5", "--seed", "11"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    for r in json_lines(&a) {
        let k = r["result"]["k"].as_u64().unwrap();
        let brute = (0..k).filter(|n| (n * n + 1) % k == 0).count() as u64;
        assert_eq!(r["result"]["omega"].as_u64().unwrap(), brute);
    }
}

#[test]
fn vw_config_file() {
    let dir = std::env::temp_dir().join(format!("smoothpoly-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("vw.json");
    std::fs::write(&path, r#"{"poly": "t^2-2", "instances": [{"x": 60, "z": 20, "y": 30}, {"x": 100, "z": 30, "y": 300, "depth": 2}]}"#)
        .unwrap();
    let out = run(&["vw-verify", "--config", path.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = json_lines(&out);
    assert_eq!(recs.len(), 2);
    assert!(recs.iter().all(|r| r["result"]["passed"] == true));
}

#[test]
fn arctan_matches_r1() {
    let out = run(&["arctan", "--x", "1000"]);
    let r = &json_lines(&out)[0]["result"];
    assert_eq!(r["report"]["count"], 720);
    assert_eq!(r["equal"], true);
}
