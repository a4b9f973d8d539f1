use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_corig")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("corig-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Writes the named fixture's graph (with T and labels) to a file.
fn fixture_file(name: &str) -> PathBuf {
    let out = corig(&["fixtures", "--name", name]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let path = scratch(&format!("{name}.json"));
    fs::write(&path, v[0]["graph"].to_string()).unwrap();
    path
}

#[test]
fn strong_sparsity_witness_uses_labels() {
    let g = fixture_file("fig4");
    let out = corig(&["sparse", "--graph", g.to_str().unwrap(), "--T", "u,v,w", "--strong"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["sparse"], false);
    assert_eq!(v["violation"]["S"], serde_json::json!(["u", "v"]));
    assert_eq!(v["violation"]["witness"][0], serde_json::json!(["u", "v", "b"]));

    let out = corig(&["sparse", "--graph", g.to_str().unwrap(), "--T", "0,1,2"]);
    assert_eq!(json_of(&out)["sparse"], true);
}

#[test]
fn check_and_mrank_on_fig4() {
    let out = corig(&["check", "--fixture", "fig4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["results"][0]["failing_S"], serde_json::json!(["u", "v"]));
    assert_eq!(v["consistent"], true);

    let g = fixture_file("fig4");
    let out = corig(&["mrank", "--graph", g.to_str().unwrap(), "--oracle", "both", "--witness"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["certificates"][0]["rank"], 12);
    assert_eq!(v["certificates"][1]["rank"], 12);
    assert_eq!(v["certificates"][0]["dual"]["val"], 12);
}

#[test]
fn rank_at_printed_realization() {
    let out = corig(&["fixtures", "--name", "fig3-1"]);
    let v = json_of(&out);
    let g = scratch("fig3-1.json");
    let p = scratch("fig3-1-p.json");
    fs::write(&g, v[0]["graph"].to_string()).unwrap();
    fs::write(&p, v[0]["realization"].to_string()).unwrap();
    let out = corig(&["rank", "--graph", g.to_str().unwrap(), "--realization", p.to_str().unwrap()]);
    assert_eq!(json_of(&out)["rank"], 15);
    let out = corig(&["rank", "--graph", g.to_str().unwrap(), "--trials", "2", "--mod-p"]);
    let v = json_of(&out);
    assert_eq!((v["rank"].as_u64(), v["method"].as_str()), (Some(15), Some("prime-field")));
}

#[test]
fn gen_transform_and_out_file() {
    let report = scratch("gen.json");
    let out = corig(&["gen", "--henneberg", "6", "--seed", "3", "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let written: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(written, json_of(&out));
    assert_eq!(written["edges"].as_array().unwrap().len(), 9);

    let out = corig(&["transform", "--op", "0ext", "--graph", report.to_str().unwrap(), "--args", "0,1"]);
    let v = json_of(&out);
    assert_eq!((v["n"].as_u64(), v["edges"].as_array().unwrap().len()), (Some(7), 11));

    let g = fixture_file("fig4");
    let out = corig(&["transform", "--op", "split", "--graph", g.to_str().unwrap(), "--args", "d:u:v,w:a"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!((v["n"].as_u64(), v["edges"].as_array().unwrap().len()), (Some(9), 15));
}

#[test]
fn harness_verbs() {
    let out = corig(&["xval", "--samples", "30", "--n-max", "6", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["passed"], true);

    let out = corig(&["conjecture", "--budget", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["candidates"], serde_json::json!([]));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(corig(&["conjecture", "--t-size", "3", "--budget", "5"]).status.code(), Some(2));
    assert_eq!(corig(&["rank", "--graph", "/nonexistent/g.json"]).status.code(), Some(2));
    assert_eq!(corig(&["frobnicate"]).status.code(), Some(2));
    let g = fixture_file("fig4");
    assert_eq!(corig(&["sparse", "--graph", g.to_str().unwrap(), "--T", "zz"]).status.code(), Some(2));
    assert_eq!(
        corig(&["transform", "--op", "1ext", "--graph", g.to_str().unwrap(), "--args", "0,1"]).status.code(),
        Some(2)
    );
    let out = corig(&["fixtures", "--name", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].as_str().unwrap().contains("nope"));
}
