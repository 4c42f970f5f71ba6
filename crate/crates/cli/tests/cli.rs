use std::path::Path;
use std::process::Command;

use hilbert_kit_cli::{main_with_args, run, RunConfig};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["hilbert-kit"];
    argv.extend_from_slice(args);
    let code = main_with_args(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn data_lines(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(String::from)
        .collect()
}

#[test]
fn distance_from_the_centre_of_the_disk() {
    let (code, out, _) = call(&["distance", "--x", "0,0", "--y", "0.5,0"]);
    assert_eq!(code, 0);
    let d: f64 = out.trim().parse().unwrap();
    assert!((d - 0.5f64.atanh()).abs() < 1e-12);
    assert!(out.starts_with("0.549306"));
}

#[test]
fn simplex_group_has_three_limit_points() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("limit.csv");
    let (code, _, _) = call(&["limitset", "--group", "simplex-diagonal", "--length", "6", "--out", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    let lines = data_lines(&csv);
    assert_eq!(lines[0], "x,y,word_length,word");
    assert_eq!(lines.len(), 4);
    assert!(dir.path().join("limit.svg").exists());
}

#[test]
fn verify_facts_exit_codes() {
    let (code, _, err) = call(&["verify-facts", "--configurations", "70"]);
    assert_eq!(code, 1);
    assert!(err.contains("FAIL scaled small ball inside the large ball"));
    assert!(!err.contains("closed face inside the scaled small ball"));
    let (code, _, err) = call(&["verify-facts", "--configurations", "70", "--ratio", "tight"]);
    assert_eq!(code, 0, "{err}");
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"schema":"hilbert-kit/1","command":"distance","x":[0,0],"y":[0.1,0],"colour":1}"#).unwrap();
    assert_eq!(call(&["distance", "--config", bad.to_str().unwrap()]).0, 2);
    std::fs::write(&bad, r#"{"schema":"hilbert-kit/0","command":"distance","x":[0,0],"y":[0.1,0]}"#).unwrap();
    assert_eq!(call(&["distance", "--config", bad.to_str().unwrap()]).0, 2);
    assert_eq!(call(&["distance", "--x", "0,0"]).0, 2);
    assert_eq!(call(&["verify-facts", "--tol", "-1"]).0, 2);
    assert_eq!(call(&["limitset", "--group", "nonexistent"]).0, 2);
    assert_eq!(call(&["frobnicate"]).0, 2);
    // a well-formed request the computation rejects
    assert_eq!(call(&["distance", "--x", "2,0", "--y", "0,0"]).0, 3);
}

#[test]
fn json_configs_and_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let out = dir.path().join("d.json");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"schema":"hilbert-kit/1","command":"distance",
                "body":{{"kind":"ellipsoid","center":[0,0],"shape":[[4,0],[0,1]]}},
                "x":[0,0],"y":[0.25,0],"output":{:?}}}"#,
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let (code, stdout, _) = call(&["distance", "--config", cfg.to_str().unwrap(), "--y", "0,0.5"]);
    assert_eq!(code, 0);
    assert!((stdout.lines().next().unwrap().parse::<f64>().unwrap() - 0.5f64.atanh()).abs() < 1e-12);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["schema"], "hilbert-kit/1");
    assert_eq!(doc["config"]["y"], serde_json::json!([0.0, 0.5]));
    assert_eq!(doc["config"]["seed"], 0);
    assert_eq!(doc["config"]["command"], "distance");
}

#[test]
fn every_artifact_embeds_the_resolved_config() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(hilbert_kit_cli::Command::Coverage);
    cfg.group = Some(hilbert_kit_cli::GroupSource::Builtin("simplex-diagonal".into()));
    cfg.output = Some(dir.path().join("cov.csv"));
    let outcome = run(cfg).unwrap();
    assert!(outcome.pass);
    let text = std::fs::read_to_string(dir.path().join("cov.csv")).unwrap();
    let first = text.lines().next().unwrap();
    let embedded: RunConfig = RunConfig::from_json(first.strip_prefix("# config: ").unwrap()).unwrap();
    assert_eq!(embedded.lengths, Some((2..=10).collect()));
    assert_eq!(embedded.samples, Some(720));
    let rows = data_lines(&dir.path().join("cov.csv"));
    assert_eq!(rows.len(), 10);
    for row in &rows[1..] {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells[1], "3");
        assert!(cells[2].parse::<f64>().unwrap() >= 0.2);
    }
}

#[test]
fn grain_probe_statuses() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("grain.json");
    std::fs::write(
        &cfg,
        r#"{"schema":"hilbert-kit/1","command":"grain-probe",
            "step_function":{"breakpoints":[1.0,4.0],"values":[2.5,1.0]},
            "grain":{"theta":1.0,"z":0.0,"r":0.9,"big_r":1.0,"halfwidth":0.1,"delta":0.001,"samples":16,"u_grid":41}}"#,
    )
    .unwrap();
    let (code, out, _) = call(&["grain-probe", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("HypothesisNotMet"));
    let (code, out, _) = call(&["grain-probe"]);
    assert_eq!(code, 0);
    assert!(out.contains("Pass"));
}

#[test]
fn help_lists_every_command() {
    let out = Command::new(env!("CARGO_BIN_EXE_hilbert-kit")).arg("--help").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for c in [
        "distance",
        "face",
        "ball",
        "shadow",
        "limitset",
        "coverage",
        "verify-facts",
        "grain-probe",
        "omegaf-build",
        "shadow-lemma",
    ] {
        assert!(text.contains(c), "{c} missing from help");
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_hilbert-kit");
    let ok = Command::new(bin).args(["face", "--x", "1,1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8(ok.stdout).unwrap().contains("dimension 0"));
    let bad = Command::new(bin).args(["ball", "--x", "0,0"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
