mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::data;
use serde_json::Value;

fn discdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_discdyn")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_reports_graph() {
    let v = json(&discdyn(&["analyze", "--input", path(&data("ghk.json"))]));
    assert_eq!(v["edges"].as_array().unwrap().len(), 5);
    assert!((v["spectral_radius"].as_f64().unwrap() - 1.618033988749895).abs() < 1e-9);
    assert_eq!(v["complete"], false);
    assert_eq!(v["has_cycle"], true);
}

#[test]
fn analyze_output_is_valid_input() {
    let dir = tempfile::tempdir().unwrap();
    let first = discdyn(&["analyze", "--input", path(&data("ghk.json")), "--out", path(dir.path())]);
    assert!(first.status.success());
    let written = dir.path().join("analyze.json");
    let again = discdyn(&["analyze", "--input", path(&written)]);
    assert_eq!(json(&first), json(&again));
}

#[test]
fn same_seed_same_bytes() {
    let run = |seed: &str| {
        let dir = tempfile::tempdir().unwrap();
        let out = discdyn(&[
            "simulate",
            "--input",
            path(&data("ghk.json")),
            "--seed",
            seed,
            "--steps",
            "60",
            "--out",
            path(dir.path()),
            "--csv",
        ]);
        assert!(out.status.success());
        (
            std::fs::read(dir.path().join("simulate.json")).unwrap(),
            std::fs::read(dir.path().join("trace.csv")).unwrap(),
        )
    };
    assert_eq!(run("7"), run("7"));
    let a = discdyn(&["classify", "--input", path(&data("ghk.json")), "--seed", "11"]);
    let b = discdyn(&["classify", "--input", path(&data("ghk.json")), "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    };
    let identity = write(
        "id.json",
        r#"{"generators": [{"name": "id", "a": [1, 0], "b": [0, 0], "c": [0, 0], "d": [1, 0]}]}"#,
    );
    let empty = write("empty.json", r#"{"generators": []}"#);
    let broken = write("broken.json", "{");
    let unknown = write("unknown.json", r#"{"period": ["g", "x"]}"#);
    let single = write(
        "single.json",
        r#"{"generators": [{"name": "g", "a": [0, 0], "b": [0.5, 0], "c": [1, 0], "d": [1.5, 0]}]}"#,
    );
    let code = |args: &[&str]| discdyn(args).status.code().unwrap();
    assert_eq!(code(&["analyze", "--input", path(&identity)]), 2);
    assert_eq!(code(&["analyze", "--input", path(&empty)]), 2);
    assert_eq!(code(&["analyze", "--input", path(&broken)]), 2);
    assert_eq!(code(&["analyze", "--input", path(&dir.path().join("missing.json"))]), 2);
    assert_eq!(code(&["classify", "--input", path(&data("ghk.json")), "--word", path(&unknown)]), 2);
    assert_eq!(code(&["dimension", "--input", path(&single)]), 3);
    let out = discdyn(&["analyze", "--input", path(&identity)]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("id"));
}

#[test]
fn simulate_limit_disc_word() {
    let dir = tempfile::tempdir().unwrap();
    let out = discdyn(&[
        "simulate",
        "--input",
        path(&data("ghk.json")),
        "--word",
        path(&data("word_gh.json")),
        "--steps",
        "300",
        "--csv",
        "--out",
        path(dir.path()),
    ]);
    let v = json(&out);
    assert_eq!(v["classification"]["verdict"], "limit-disc");
    assert!((v["final_disc"]["radius"].as_f64().unwrap() - 0.25).abs() < 1e-9);
    assert_eq!(v["tangency_chain"]["eventually_tangent"], true);

    let mut rdr = csv::Reader::from_path(dir.path().join("trace.csv")).unwrap();
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        ["n", "radius", "center_re", "center_im", "dist_j", "height", "partial_sum"]
    );
    let radii: Vec<f64> = rdr.records().map(|r| r.unwrap()[1].parse().unwrap()).collect();
    assert_eq!(radii.len(), 300);
    assert!(radii.windows(2).all(|w| w[1] <= w[0] + 1e-15));
}

#[test]
fn simulate_point_word() {
    let v = json(&discdyn(&[
        "simulate",
        "--input",
        path(&data("ghk.json")),
        "--word",
        path(&data("word_gg.json")),
    ]));
    assert_eq!(v["classification"]["verdict"], "limit-point");
    assert!(v["final_disc"]["radius"].as_f64().unwrap() < 1e-6);
    assert_eq!(v["ideal_limit"]["converged"], true);
}

#[test]
fn short_runs_report_section_errors() {
    let v = json(&discdyn(&[
        "simulate",
        "--input",
        path(&data("ghk.json")),
        "--word",
        path(&data("word_gh.json")),
        "--steps",
        "5",
    ]));
    assert!(v["escape"]["error"].is_string());
    assert_eq!(v["steps"], 5);
    assert!(v["final_disc"]["radius"].is_number());
}

#[test]
fn explicit_points() {
    let v = json(&discdyn(&[
        "simulate",
        "--input",
        path(&data("ghk.json")),
        "--word",
        path(&data("word_gh.json")),
        "--points",
        "0,0;1,0;0.5,0.5",
    ]));
    assert_eq!(v["pointwise"]["per_point"].as_array().unwrap().len(), 3);
}

#[test]
fn dimension_reports() {
    let v = json(&discdyn(&["dimension", "--input", path(&data("mixed.json"))]));
    assert_eq!(v["method"], "Theorem4");
    assert!((v["value"].as_f64().unwrap() - 0.918295834054).abs() < 1e-9);
    assert!((v["s_star"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-9);

    let v = json(&discdyn(&["dimension", "--input", path(&data("incomplete.json"))]));
    assert_eq!(v["method"], "UpperBoundOnly");

    let v = json(&discdyn(&["dimension", "--input", path(&data("ghk.json"))]));
    assert_eq!(v["method"], "Theorem3");
    assert!((v["value"].as_f64().unwrap() - 0.438017879).abs() < 1e-9);
}
