use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn remono(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_remono"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

fn machine(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "machine"];
    full.extend_from_slice(args);
    let r = remono(&full);
    let v: Value =
        serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", r.stdout));
    (r.code, v)
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn cycle(n: usize) -> String {
    let mut t = format!("p edge {n} {n}\n");
    for i in 1..=n {
        t += &format!("e {} {}\n", i, i % n + 1);
    }
    t
}

fn complete(n: usize) -> String {
    let mut edges = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            edges.push(format!("e {i} {j}"));
        }
    }
    format!("p edge {n} {}\n{}\n", edges.len(), edges.join("\n"))
}

const ORTHANT: &str = r#"{"dim": 2, "cells": [{"ge": [["1", "0"], ["0", "1"]]}]}"#;
const WATER: &str = "species: H2, O2, H2O\n2 H2 + O2 -> 2 H2O\n";

#[test]
fn numsg_gaps_line() {
    let r = remono(&["numsg", "gaps", "--gen", "9,15"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout.trim(), "d=3; gaps {1,2,4,7}; frobenius 7");
    let (_, v) = machine(&["numsg", "gaps", "--gen", "9,15"]);
    assert_eq!(v["result"]["frobenius"], 7);
    assert_eq!(v["result"]["normalized"], serde_json::json!([3, 5]));
}

#[test]
fn cone_rate_on_orthant() {
    let dir = TempDir::new().unwrap();
    let cone = write(&dir, "orthant2.cone", ORTHANT);
    let r = remono(&[
        "cone",
        "rate",
        "--cone",
        s(&cone),
        "--x",
        "2,1",
        "--y",
        "1,1",
    ]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout.lines().next(), Some("Rmax = 1"));
    let (_, v) = machine(&[
        "cone",
        "rate",
        "--cone",
        s(&cone),
        "--x",
        "2,1",
        "--y",
        "1,1",
    ]);
    assert_eq!(v["result"]["r_max"], "1/1");
}

#[test]
fn pentagon_capacity_is_half_log_five() {
    let dir = TempDir::new().unwrap();
    let c5 = write(&dir, "c5.graph", &cycle(5));
    let (code, v) = machine(&["graph", "capacity", "--file", s(&c5), "--max-power", "2"]);
    assert_eq!(code, 0);
    let target = 0.5 * 5f64.log2();
    let iv = &v["result"]["report"]["interval"];
    assert!((iv["lower"].as_f64().unwrap() - target).abs() < 1e-9);
    assert!((iv["upper"].as_f64().unwrap() - target).abs() < 1e-5);
    assert!(v["result"]["tol"].is_number());
    assert_eq!(v["result"]["report"]["fractional_chromatic"], "5/2");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let c5 = write(&dir, "c5.graph", &cycle(5));
    let k3 = write(&dir, "k3.graph", &complete(3));
    assert_eq!(remono(&["graph", "hom", s(&c5), s(&k3)]).code, 0);
    assert_eq!(remono(&["graph", "hom", s(&k3), s(&c5)]).code, 1);
    let c7 = write(&dir, "c7.graph", &cycle(7));
    let tight = remono(&["--budget-nodes", "1", "graph", "hom", s(&c7), s(&k3)]);
    assert_eq!(tight.code, 2, "{}", tight.stdout);
    assert_eq!(remono(&["graph", "frobnicate"]).code, 64);
    assert_eq!(
        remono(&["numsg", "gaps", "--gen", "9,15", "--unknown-flag"]).code,
        64
    );
    assert_eq!(
        remono(&["--jobs", "0", "numsg", "gaps", "--gen", "3"]).code,
        64
    );
    assert_eq!(remono(&["--help"]).code, 0);
}

#[test]
fn malformed_inputs_report_lines() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "bad.graph", "p edge 3 2\ne 1 2\ne 2 9\n");
    let r = remono(&["graph", "invariants", s(&g)]);
    assert_eq!(r.code, 65);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);

    let c = write(
        &dir,
        "bad.cone",
        "{\"dim\": 2,\n\"cells\": [{\"ge\": [[\"1\", \"x\"]]}]}",
    );
    let r = remono(&["cone", "dual", s(&c)]);
    assert_eq!(r.code, 65);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);

    let sys = write(&dir, "bad.rxn", "species: A, B\nA -> B\nA + B\n");
    let r = remono(&["rxn", "laws", s(&sys)]);
    assert_eq!(r.code, 65);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);

    let ch = write(
        &dir,
        "bad.ch",
        r#"{"inputs": 1, "outputs": 2, "matrix": [["1/2", "1/3"]]}"#,
    );
    assert_eq!(remono(&["channel", "graph", s(&ch)]).code, 65);
}

#[test]
fn machine_output_reads_back() {
    let dir = TempDir::new().unwrap();
    let c5 = write(&dir, "c5.graph", &cycle(5));
    let k2 = write(&dir, "k2.graph", &complete(2));

    let product = remono(&["--format", "machine", "graph", "product", s(&c5), s(&k2)]);
    assert_eq!(product.code, 0);
    let p = write(&dir, "product.json", &product.stdout);
    let (_, inv) = machine(&["graph", "invariants", s(&p)]);
    assert_eq!(inv["result"]["vertices"], 10);
    // ω(C5 ∗ K2) = ω(C5)·ω(K2)
    assert_eq!(inv["result"]["clique"]["exact"], 4);

    let cone = write(
        &dir,
        "half.cone",
        r#"{"dim": 2, "cells": [{"ge": [["1","0"],["0","1"],["-1","0"],["0","-1"]]}, {"ge": [["1","0"],["0","1"]], "gt": [["1","0"]]}]}"#,
    );
    assert_eq!(
        remono(&["cone", "contains", s(&cone), "--v", "0,1"]).code,
        1
    );
    let closed = remono(&["--format", "machine", "cone", "close", s(&cone)]);
    let closed = write(&dir, "closed.json", &closed.stdout);
    assert_eq!(
        remono(&["cone", "contains", s(&closed), "--v", "0,1"]).code,
        0
    );

    let id = write(
        &dir,
        "id.ch",
        r#"{"inputs": 2, "outputs": 2, "matrix": [["1","0"],["0","1"]]}"#,
    );
    let t = remono(&["--format", "machine", "channel", "tensor", s(&id), s(&id)]);
    let t = write(&dir, "t.json", &t.stdout);
    let (_, g) = machine(&["channel", "graph", s(&t)]);
    assert_eq!(g["result"]["vertices"], 4);
    let g = write(&dir, "g.json", &serde_json::to_string(&g).unwrap());
    let (_, inv) = machine(&["graph", "invariants", s(&g)]);
    assert_eq!(inv["result"]["clique"]["exact"], 4);
}

#[test]
fn machine_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let noisy = write(
        &dir,
        "bsc.ch",
        r#"{"inputs": 3, "outputs": 3, "matrix": [["1/2","1/2","0"],["0","1/2","1/2"],["1/2","0","1/2"]]}"#,
    );
    let id = write(
        &dir,
        "id.ch",
        r#"{"inputs": 2, "outputs": 2, "matrix": [["1","0"],["0","1"]]}"#,
    );
    for args in [
        vec![
            "--format",
            "machine",
            "channel",
            "search",
            s(&noisy),
            s(&id),
            "--seed",
            "7",
        ],
        vec![
            "--format",
            "machine",
            "--jobs",
            "3",
            "rate",
            "slice",
            "--instance",
            "major",
            "--x",
            "1/2,1/2",
            "--y",
            "3/4,1/4",
        ],
        vec![
            "--format",
            "machine",
            "cone",
            "numerical",
            s(&write(&dir, "o.cone", ORTHANT)),
        ],
    ] {
        let a = remono(&args);
        let b = remono(&args);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.code, b.code);
    }
}

#[test]
fn rationals_are_strings() {
    let (_, v) = machine(&[
        "rate",
        "bounds",
        "--instance",
        "major",
        "--x",
        "1/2,1/2",
        "--y",
        "3/4,1/4",
        "--n-max",
        "3",
    ]);
    let lower = v["result"]["lower"]
        .as_str()
        .expect("exact lower bound is a string");
    assert!(lower.contains('/'));
    assert!(v["result"]["tol"].is_number());
}

#[test]
fn reactions() {
    let dir = TempDir::new().unwrap();
    let sys = write(&dir, "water.rxn", WATER);
    let (code, v) = machine(&["rxn", "reach", s(&sys), "--x", "2 H2 + O2", "--y", "2 H2O"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verified"], true);
    let (code, v) = machine(&["rxn", "reach", s(&sys), "--x", "2 H2O", "--y", "2 H2 + O2"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["refutation"]["reason"], "separated");

    let (_, v) = machine(&["rxn", "laws", s(&sys), "--atoms"]);
    assert_eq!(v["result"]["every_law_is_atomic"], true);
    assert_eq!(v["result"]["laws"].as_array().unwrap().len(), 2);

    let (code, v) = machine(&[
        "rate",
        "bounds",
        "--instance",
        "rxn",
        "--system",
        s(&sys),
        "--x",
        "2 H2 + O2",
        "--y",
        "H2O",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["lower"], "2/1");
    assert_eq!(
        remono(&[
            "rate",
            "bounds",
            "--instance",
            "rxn",
            "--x",
            "H2",
            "--y",
            "H2"
        ])
        .code,
        64
    );
}

#[test]
fn catalyst_for_pentagon_cube() {
    let dir = TempDir::new().unwrap();
    let c5 = write(&dir, "c5.graph", &cycle(5));
    let k11 = write(&dir, "k11.graph", &complete(11));
    assert_eq!(remono(&["graph", "hom", s(&k11), s(&c5)]).code, 1);
    let (code, v) = machine(&[
        "graph",
        "catalyst",
        "--x",
        s(&c5),
        "--x-power",
        "3",
        "--y",
        s(&k11),
        "--copies",
        "2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["copies"], 2);
    assert_eq!(v["result"]["catalyst"], "join(y, x^3)");
    assert_eq!(v["result"]["catalyst_vertices"], 136);
    assert_eq!(v["result"]["verified"], true);
}

#[test]
fn channels_and_majorization() {
    let dir = TempDir::new().unwrap();
    let id = write(
        &dir,
        "id.ch",
        r#"{"inputs": 2, "outputs": 2, "matrix": [["1","0"],["0","1"]]}"#,
    );
    let flip = write(
        &dir,
        "flip.ch",
        r#"{"inputs": 2, "outputs": 2, "matrix": [["0","1"],["1","0"]]}"#,
    );
    let coin = write(
        &dir,
        "coin.ch",
        r#"{"inputs": 2, "outputs": 2, "matrix": [["1/2","1/2"],["1/2","1/2"]]}"#,
    );
    assert_eq!(
        remono(&[
            "channel",
            "verify",
            s(&id),
            s(&flip),
            "--enc",
            s(&flip),
            "--dec",
            s(&id)
        ])
        .code,
        0
    );
    assert_eq!(
        remono(&[
            "channel",
            "verify",
            s(&id),
            s(&id),
            "--enc",
            s(&flip),
            "--dec",
            s(&id)
        ])
        .code,
        1
    );
    assert_eq!(remono(&["channel", "search", s(&coin), s(&id)]).code, 1);
    assert_eq!(remono(&["channel", "search", s(&id), s(&coin)]).code, 0);

    assert_eq!(remono(&["major", "leq", "1/2,1/2", "1/2,1/4,1/4"]).code, 0);
    assert_eq!(remono(&["major", "leq", "1/2,1/4,1/4", "1/2,1/2"]).code, 1);
    let (_, v) = machine(&["major", "renyi", "1/2,1/4,1/4", "--t", "one"]);
    assert!((v["result"]["entropy"].as_f64().unwrap() - 1.5).abs() < 1e-12);
    let (code, v) = machine(&[
        "major",
        "rate",
        "1/2,1/4,1/4",
        "1/2,1/2",
        "--max-copies",
        "4",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["interval"]["lower"], "1/1");
}
