use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn rcre(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rcre")).args(args).output().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn score_prints_report() {
    let dir = tempfile::tempdir().unwrap();
    let scorer = fixtures().join("scorer");
    let out = rcre(&[
        "--out",
        dir.path().to_str().unwrap(),
        "score",
        "--gold",
        scorer.join("gold.jsonl").to_str().unwrap(),
        "--pred",
        scorer.join("pred.jsonl").to_str().unwrap(),
        "--group-by",
        "pid",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["tp"], 2);
    assert_eq!(report["f1"].as_f64().unwrap(), 2.0 / 3.0);
    assert!(report["groups"]["P17"].is_object());
    assert!(dir.path().join("score/report.json").exists());
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("score/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["settings"]["group_by"], "pid");
    assert_eq!(manifest["inputs"]["gold"]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = rcre(&["train"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("Usage"));
}

#[test]
fn help_exits_zero() {
    let out = rcre(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for sub in ["ingest", "slotfill", "querify", "split", "stats", "build", "score", "baseline"] {
        assert!(text.contains(sub), "{sub} missing from help");
    }
}

#[test]
fn stage_without_config_is_a_usage_error() {
    let out = rcre(&["ingest"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--config"));
}

#[test]
fn bad_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "kb = missing.jsonl\nproperties = p.tsv\ntemplates = t.tsv\ncorpus.en = en.jsonl\n").unwrap();
    let out = rcre(&["--config", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap(), "ingest"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("stage `ingest`"), "{}", stderr(&out));

    let out = rcre(&["--config", dir.path().join("none.cfg").to_str().unwrap(), "ingest"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn predictions_for_unknown_examples_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let pred = dir.path().join("pred.jsonl");
    std::fs::write(&pred, "{\"example_id\":\"nope\",\"answer\":\"x\"}\n").unwrap();
    let gold = fixtures().join("scorer/gold.jsonl");
    let out = rcre(&["--out", dir.path().to_str().unwrap(), "score", "--gold", gold.to_str().unwrap(), "--pred", pred.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn baselines_on_scorer_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let gold = fixtures().join("scorer/gold.jsonl");
    let outs = dir.path().to_str().unwrap();
    let mut f1 = Vec::new();
    for mode in ["oracle", "nil", "heuristic"] {
        let out = rcre(&["--out", outs, "baseline", "--mode", mode, "--gold", gold.to_str().unwrap()]);
        assert!(out.status.success(), "{}", stderr(&out));
        let pred = dir.path().join(format!("baseline/{mode}.jsonl"));
        assert!(dir.path().join(format!("baseline/{mode}.manifest.json")).exists());
        let out = rcre(&["--out", outs, "score", "--gold", gold.to_str().unwrap(), "--pred", pred.to_str().unwrap()]);
        assert!(out.status.success(), "{}", stderr(&out));
        let report: Value = serde_json::from_slice(&out.stdout).unwrap();
        f1.push(report["f1"].as_f64().unwrap());
    }
    assert_eq!(f1[0], 1.0);
    assert_eq!(f1[1], 0.0);
    assert!((0.0..=1.0).contains(&f1[2]));
}

#[test]
fn ids_restrict_scoring() {
    let dir = tempfile::tempdir().unwrap();
    let scorer = fixtures().join("scorer");
    let ids = dir.path().join("ids.txt");
    std::fs::write(&ids, "g1\ng4\n").unwrap();
    let out = rcre(&[
        "--out",
        dir.path().to_str().unwrap(),
        "score",
        "--gold",
        scorer.join("gold.jsonl").to_str().unwrap(),
        "--pred",
        scorer.join("pred.jsonl").to_str().unwrap(),
        "--ids",
        ids.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["f1"].as_f64().unwrap(), 1.0);
}

#[test]
fn stages_run_one_at_a_time() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixtures().join("fixture.cfg");
    let outs = dir.path().to_str().unwrap();
    for stage in ["ingest", "slotfill", "querify", "split", "stats"] {
        let out = rcre(&["--config", cfg.to_str().unwrap(), "--out", outs, "--langs", "en,it", stage]);
        assert!(out.status.success(), "{stage}: {}", stderr(&out));
        assert!(dir.path().join(stage).join("manifest.json").exists());
    }
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("split/report.json")).unwrap()).unwrap();
    let langs: Vec<&String> = report["unent"].as_object().unwrap().keys().collect();
    assert_eq!(langs, ["en", "it"]);
}
