//! End-to-end checks of the command-line interface: exit codes, formats,
//! and the documented environment override.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tracktruth"))
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

fn overlap_space(dir: &Path) -> String {
    write(
        dir,
        "space.json",
        r#"{"worlds": ["u", "s", "t"], "observables": {"p": ["u", "s"], "q": ["s", "t"]}}"#,
    )
}

fn chain_prior(dir: &Path) -> String {
    write(dir, "prior.json", r#"{"layers": [["t"], ["u"], ["s"]]}"#)
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn validate_reports_ok_and_violations() {
    let dir = tempfile::tempdir().unwrap();
    let space = overlap_space(dir.path());
    let out = bin().args(["validate", &space]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("ok"));

    let broken = write(
        dir.path(),
        "broken.json",
        r#"{"worlds": ["a", "b"], "observables": {"p": ["a", "b"]}}"#,
    );
    let out = bin().args(["validate", &broken]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("violation"));
}

#[test]
fn parse_errors_name_line_and_column_and_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\n  \"worlds\": [,]\n}");
    let out = bin().args(["validate", &bad]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains(":2:"), "stderr: {}", stderr(&out));
}

#[test]
fn revise_prints_the_promoted_order() {
    let dir = tempfile::tempdir().unwrap();
    let space = overlap_space(dir.path());
    let prior = chain_prior(dir.path());
    let out = bin()
        .args(["revise", &space, &prior, "--method", "mini", "p"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("[u] < [t] < [s]"), "{text}");
    assert!(text.contains("conjecture: {u}"), "{text}");
}

#[test]
fn decide_exit_code_tracks_appropriateness() {
    let dir = tempfile::tempdir().unwrap();
    let space = overlap_space(dir.path());
    let prior = chain_prior(dir.path());
    // Promotion fails on this space.
    let out = bin()
        .args(["decide", &space, &prior, "--method", "mini"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("not appropriate"));

    // Elimination succeeds with s on top of u and t... i.e. least plausible.
    let good = write(
        dir.path(),
        "good.json",
        r#"{"layers": [["u", "t"], ["s"]]}"#,
    );
    let out = bin()
        .args([
            "decide", &space, &good, "--method", "cond", "--format", "json",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["appropriate"], serde_json::Value::Bool(true));
    assert_eq!(doc["worlds"].as_array().unwrap().len(), 3);
}

#[test]
fn decide_single_target_emits_witness() {
    let dir = tempfile::tempdir().unwrap();
    let space = overlap_space(dir.path());
    let prior = chain_prior(dir.path());
    let out = bin()
        .args([
            "decide", &space, &prior, "--method", "mini", "--target", "s", "--format", "json",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let world = &doc["worlds"][0];
    assert_eq!(world["status"], "not-identified");
    assert!(!world["witness"]["cycle"].as_array().unwrap().is_empty());
}

#[test]
fn trace_renders_steps_and_recurrence() {
    let dir = tempfile::tempdir().unwrap();
    let space = overlap_space(dir.path());
    let prior = chain_prior(dir.path());
    let stream = write(
        dir.path(),
        "stream.json",
        r#"{"prefix": [], "cycle": ["p", "q"]}"#,
    );
    let out = bin()
        .args([
            "trace",
            &space,
            &prior,
            &stream,
            "--method",
            "mini",
            "--horizon",
            "6",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("recurrence"), "{text}");
    assert!(text.lines().count() >= 8, "{text}");
}

#[test]
fn telltale_kinds_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let space = overlap_space(dir.path());
    let prior = chain_prior(dir.path());
    // The overlap space is not one-shot identifiable.
    let out = bin()
        .args(["telltale", &space, "--kind", "dftt"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("fails at world"));

    // Under the flat prior nothing separates u from s inside {p}.
    let flat = write(dir.path(), "flat.json", r#"{"layers": [["u", "s", "t"]]}"#);
    let out = bin()
        .args(["telltale", &space, &flat, "--kind", "cond"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("fails at world u"));
    // The chain prior has s on the bottom layer of plausibility, so the
    // elimination tell-tale exists.
    let out = bin()
        .args(["telltale", &space, &prior, "--kind", "mini"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("fails at world s"));

    let good = write(
        dir.path(),
        "good.json",
        r#"{"layers": [["u", "t"], ["s"]]}"#,
    );
    let out = bin()
        .args([
            "telltale", &space, &good, "--kind", "cond", "--format", "json",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["map"]["assignment"]["u"][0], "p");
}

#[test]
fn sweep_and_cross_check_run() {
    let dir = tempfile::tempdir().unwrap();
    let space = overlap_space(dir.path());
    let prior = chain_prior(dir.path());
    let out = bin()
        .args([
            "sweep", &space, "--method", "cond", "--jobs", "2", "--format", "json",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["total_priors"], 13);
    assert_eq!(doc["appropriate"].as_array().unwrap().len(), 3);

    let out = bin()
        .args(["cross-check", &space, &prior])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("agree"));
}

#[test]
fn scenarios_all_pass_and_explain_prints_reasons() {
    let out = bin().args(["scenario", "--all"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    let out = bin()
        .args(["scenario", "diamond-fair-trap", "--explain"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("why:"));

    let out = bin().args(["scenario", "no-such-thing"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin()
        .args(["scenario", "overlap-mini-step", "--format", "json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc[0]["pass"], serde_json::Value::Bool(true));
}

#[test]
fn fair_mode_requires_negation_closure() {
    let dir = tempfile::tempdir().unwrap();
    let space = overlap_space(dir.path());
    let prior = chain_prior(dir.path());
    let out = bin()
        .args(["decide", &space, &prior, "--method", "mini", "--fair"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("negation-closed"), "{}", stderr(&out));
}

#[test]
fn budget_env_var_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let space = overlap_space(dir.path());
    let prior = chain_prior(dir.path());
    let out = bin()
        .args(["decide", &space, &prior, "--method", "mini"])
        .env("TRACKTRUTH_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("budget"), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_2() {
    let out = bin().args(["decide"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
