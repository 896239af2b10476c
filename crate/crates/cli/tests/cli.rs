use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn resist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resist"))
        .args(args)
        .env_remove("RESIST_MAX_EXACT_N")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn trees_prints_count() {
    let out = resist(&["trees", "--family", "straight", "--m", "4"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "55");
    let out = resist(&[
        "trees", "--family", "straight", "--n", "5", "--brute", "--json",
    ]);
    let v = json(&out);
    assert_eq!(v["spanning_trees"], "21");
    assert_eq!(v["enumerated"], "21");
}

#[test]
fn res_methods_agree() {
    let v = json(&resist(&[
        "res", "--family", "straight", "--n", "9", "--pair", "1", "9",
    ]));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["agree"], true);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 3);
    for r in &results[..2] {
        assert_eq!(
            (r["value_num"].as_str(), r["value_den"].as_str()),
            (Some("92"), Some("47"))
        );
    }
    assert!((results[2]["value"].as_f64().unwrap() - 92.0 / 47.0).abs() < 1e-12);
}

#[test]
fn res_writes_trace_and_reads_edge_lists() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    let trace = dir.path().join("t.jsonl");
    let gen = resist(&[
        "gen",
        "--family",
        "straight",
        "--n",
        "6",
        "--out",
        graph.to_str().unwrap(),
    ]);
    assert!(gen.status.success());
    let v = json(&resist(&[
        "res",
        "--graph",
        graph.to_str().unwrap(),
        "--pair",
        "3",
        "4",
        "--method",
        "dy",
        "--trace",
        trace.to_str().unwrap(),
    ]));
    assert_eq!(v["results"][0]["value_num"], "5");
    assert_eq!(v["results"][0]["value_den"], "11");
    let lines = fs::read_to_string(&trace).unwrap();
    assert!(lines.lines().count() > 0);
    for line in lines.lines() {
        let step: Value = serde_json::from_str(line).unwrap();
        assert_eq!(step["schema"], 1);
    }
}

#[test]
fn res_on_non_straight_graph_skips_delta_y() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("c.txt");
    fs::write(
        &graph,
        stdout(&resist(&["gen", "--family", "cycle", "--n", "4"])),
    )
    .unwrap();
    let v = json(&resist(&[
        "res",
        "--graph",
        graph.to_str().unwrap(),
        "--pair",
        "1",
        "3",
    ]));
    assert!(v["results"][0]["skipped"].is_string());
    assert_eq!(v["results"][1]["value_num"], "1");
    assert_eq!(v["agree"], true);
}

#[test]
fn formula_outputs() {
    let v = json(&resist(&["formula", "--which", "endpoints", "--m", "2"]));
    assert_eq!(
        (v["value_num"].as_str(), v["value_den"].as_str()),
        (Some("1"), Some("1"))
    );
    let v = json(&resist(&["formula", "--which", "min", "--n", "6"]));
    assert_eq!(
        (v["value_num"].as_str(), v["value_den"].as_str()),
        (Some("5"), Some("11"))
    );
    let v = json(&resist(&["formula", "--which", "trees", "--m", "4"]));
    assert_eq!(v["count"], "55");
    let v = json(&resist(&["formula", "--which", "sbt", "--i", "1"]));
    assert!(v["s"]["value_num"].is_string());
}

#[test]
fn rank_matches_golden_head() {
    let out = resist(&["rank", "--n", "9", "--text"]);
    assert!(stdout(&out).starts_with("{3,6} & {4,7}, {2,5} & {5,8}"));
    let csv = stdout(&resist(&["rank", "--n", "9", "--top", "3"]));
    assert_eq!(csv.lines().count(), 4);
    let csv = stdout(&resist(&[
        "rank",
        "--n",
        "9",
        "--top",
        "3",
        "--ties",
        "report-group",
    ]));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn conjecture_tables_are_labelled() {
    let out = resist(&["conjecture", "--which", "grid", "--rows-max", "4"]);
    let text = stdout(&out);
    assert!(out.status.success());
    assert_eq!(text.lines().count(), 4);
    assert!(text
        .lines()
        .skip(1)
        .all(|l| l.ends_with(",exact,conjectural")));

    let out = Command::new(env!("CARGO_BIN_EXE_resist"))
        .args(["conjecture", "--which", "ktree", "--k", "2", "--n-max", "8"])
        .env("RESIST_MAX_EXACT_N", "0")
        .output()
        .unwrap();
    assert!(stdout(&out)
        .lines()
        .skip(1)
        .all(|l| l.ends_with(",float,conjectural")));
}

#[test]
fn verify_passes_small() {
    let v = json(&resist(&[
        "verify", "--max-n", "10", "--max-m", "8", "--json",
    ]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["bent_reading"], "additive");
    assert!(!v["bent_evidence"].as_array().unwrap().is_empty());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["bogus"],
        vec![
            "res", "--family", "straight", "--n", "3", "--pair", "1", "9",
        ],
        vec![
            "res", "--family", "cycle", "--n", "5", "--pair", "1", "3", "--method", "dy",
        ],
        vec!["formula", "--which", "closed", "--m", "3"],
        vec!["gen", "--family", "bent", "--n", "8"],
        vec!["rank"],
    ] {
        let out = resist(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}
