//! End-to-end runs of the `srrham` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn srrham(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srrham"))
        .args(args)
        .env_remove("SRRHAM_PIVOT_LIMIT")
        .output()
        .expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = srrham(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn generated_code_round_trips_through_every_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("code.json");
    let out = srrham(&["gen", "-r", "3", "-q", "2", "--systematic", "--natural-order", "--out", path_str(&code)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let file = path_str(&code);

    let text = std::fs::read_to_string(&code).unwrap();
    assert!(!text.contains('.'), "no decimal numbers in code JSON");
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["systematic_positions"], json!([3, 5, 6, 7]));

    let rec = ok_json(&["recovery", file]);
    assert_eq!(rec["total_sets"], 20);
    assert_eq!(rec["symbols"][0]["sets"][0], json!([3]));

    let check = ok_json(&["check", file, "--demand", "1,1,1,2", "--capacity", "1"]);
    assert_eq!(check["member"], true);
    let check = ok_json(&["check", file, "--demand", "3,1/2,0,0"]);
    assert_eq!(check["member"], false);

    assert_eq!(ok_json(&["max", file])["value"], "5");
    assert_eq!(ok_json(&["max", file, "--weights", "1,2,0,0"])["value"], "6");
    assert_eq!(ok_json(&["lambda-star", file, "--symbol", "c"])["lambda_star"], "3");
    assert_eq!(ok_json(&["delta", file])["delta"], "3");
    assert_eq!(ok_json(&["delta", file, "--capacity", "2/3"])["delta"], "2");
    assert_eq!(ok_json(&["subset", file, "--symbols", "a,b,c"])["computed"], "3");
    assert_eq!(ok_json(&["subset", file, "--all"])["constraints"].as_array().unwrap().len(), 15);
    let stats = ok_json(&["stats", file]);
    assert_eq!((stats["nu"].clone(), stats["tau"].clone(), stats["mu_f"].clone()), (json!(5), json!(5), json!("5")));

    let wf = ok_json(&["waterfill", file, "--demand", "3,0,0,0"]);
    assert_eq!(wf["residual"], json!(["0", "0", "0", "0"]));
    assert_eq!(wf["loads"], json!(["1", "1", "1", "1", "1", "1", "1"]));

    let report = ok_json(&["verify", file]);
    assert_eq!(report["all_pass"], true);
    for claim in report["claims"].as_array().unwrap() {
        for key in ["claim", "paper_anchor", "predicted", "computed", "pass"] {
            assert!(claim.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn import_accepts_bare_generator_rows() {
    let dir = tempfile::tempdir().unwrap();
    let rows = dir.path().join("g.json");
    std::fs::write(
        &rows,
        "[[1,1,0,0,1,1,0],[0,0,1,0,1,1,0],[1,0,1,0,1,0,1],[0,1,1,1,1,0,0]]",
    )
    .unwrap();
    let canonical = dir.path().join("code.json");
    let v = ok_json(&["import", path_str(&rows)]);
    assert_eq!(v["systematic_positions"], Value::Null);
    assert_eq!(v["d"]["value"], 3);
    std::fs::write(&canonical, serde_json::to_string(&v).unwrap()).unwrap();
    let stars = ok_json(&["lambda-star", path_str(&canonical)]);
    assert_eq!(stars["lambda_star"], json!(["3", "7/3", "3", "3"]));
    let sub = ok_json(&["stats", path_str(&canonical), "--symbols", "b"]);
    assert_eq!(sub["mu_f"], "7/3");
    assert_eq!(sub["edges"], 7);
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        vec!["verify", "-r", "3"],
        vec!["stats", "--preset", "ham32-nonsystematic"],
        vec!["check", "-r", "4", "--demand", "1,2,0,0,0,0,0,0,0,0,1/3"],
        vec!["slice", "--preset", "ham32-natural", "--fix", "d=0", "--axes", "a,b,c", "--max", "3", "--step", "1"],
    ] {
        let a = srrham(&args);
        let b = srrham(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn slice_reproduces_cross_section() {
    let out = srrham(&[
        "slice", "--preset", "ham32-natural", "--fix", "d=0", "--axes", "a,b,c", "--max", "3", "--step", "1/4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda_a,lambda_b,lambda_c,member"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 13 * 13 * 13);
    assert!(rows.contains(&"3,0,0,true"));
    assert!(rows.contains(&"1,1,1,true"));
    assert!(rows.contains(&"3/2,3/2,1/4,false"));
}

#[test]
fn exit_codes_and_diagnostics() {
    let bad_rational = srrham(&["check", "-r", "3", "--demand", "1,0.5,0,0"]);
    assert_eq!(bad_rational.status.code(), Some(2));
    assert_eq!(String::from_utf8_lossy(&bad_rational.stderr).lines().count(), 1);

    assert_eq!(srrham(&["check", "-r", "3", "--demand", "1,1,1"]).status.code(), Some(2));
    assert_eq!(srrham(&["stats", "/nonexistent/code.json"]).status.code(), Some(2));
    assert_eq!(srrham(&["gen", "-r", "3", "-q", "6"]).status.code(), Some(2));
    assert_eq!(srrham(&["gen", "--unknown-flag"]).status.code(), Some(2));
    assert_eq!(srrham(&["max", "--preset", "nope"]).status.code(), Some(2));
    assert_eq!(srrham(&["check", "-r", "3", "--demand", "1,0,0,0", "--capacity", "0"]).status.code(), Some(2));

    // A non-member is an answer, not an error.
    assert_eq!(srrham(&["check", "-r", "3", "--demand", "4,0,0,0"]).status.code(), Some(0));

    assert_eq!(srrham(&["max", "-r", "4", "--pivot-limit", "2"]).status.code(), Some(3));
    let env_limited = Command::new(env!("CARGO_BIN_EXE_srrham"))
        .args(["max", "-r", "4"])
        .env("SRRHAM_PIVOT_LIMIT", "2")
        .output()
        .unwrap();
    assert_eq!(env_limited.status.code(), Some(3));
    let env_bad = Command::new(env!("CARGO_BIN_EXE_srrham"))
        .args(["max", "-r", "3"])
        .env("SRRHAM_PIVOT_LIMIT", "many")
        .output()
        .unwrap();
    assert_eq!(env_bad.status.code(), Some(2));
}

#[test]
fn m3_subcommand() {
    let v = ok_json(&["m3", "-r", "8"]);
    assert_eq!(v["agree"], true);
    let big = ok_json(&["m3", "-r", "20"]);
    assert_eq!(big["brute_force"], Value::Null);
    assert_eq!(srrham(&["m3", "-r", "2"]).status.code(), Some(2));
}
