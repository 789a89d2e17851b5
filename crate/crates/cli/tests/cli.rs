use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn mbfun(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mbfun")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = mbfun(&full);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn chart_file(text: &str) -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("charts.json");
    std::fs::write(&path, text).unwrap();
    (dir, path)
}

const CUSP_CHART: &str = r#"{"charts":[{"label":"origin","a":[3,0],"b":[0,2],"kappa":[0,0]}]}"#;

fn schema() -> Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/schema/report.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn is_rational(s: &str) -> bool {
    let Some((p, q)) = s.split_once('/') else { return false };
    p.trim_start_matches('-').chars().all(|c| c.is_ascii_digit())
        && !p.trim_start_matches('-').is_empty()
        && q.parse::<u64>().is_ok_and(|q| q > 0)
}

/// The top-level shape declared in the shipped schema.
fn assert_schema(report: &Value) {
    let schema = schema();
    let obj = report.as_object().expect("report is an object");
    for key in schema["required"].as_array().unwrap() {
        assert!(obj.contains_key(key.as_str().unwrap()), "missing {key}");
    }
    let allowed = schema["properties"].as_object().unwrap();
    for key in obj.keys() {
        assert!(allowed.contains_key(key), "undeclared key {key}");
    }
    assert_eq!(report["schema"], schema["properties"]["schema"]["const"]);
    assert!(schema["properties"]["status"]["enum"].as_array().unwrap().contains(&report["status"]));
}

fn assert_bfunction(b: &Value) {
    for key in ["poly", "factored", "roots", "degree"] {
        assert!(b.get(key).is_some(), "b-function lacks {key}");
    }
    for r in b["roots"].as_array().unwrap() {
        assert!(is_rational(r["root"].as_str().unwrap()), "{r}");
    }
}

#[test]
fn mero_report_matches_schema() {
    let r = json(&["bf", "mero", "x^3", "y^2", "--m", "0"]);
    assert_schema(&r);
    assert_bfunction(&r["result"]["b"]);
    assert_eq!(r["status"], "CERTIFIED");
    assert_eq!(r["result"]["b"]["factored"], "(s + 1/3)*(s + 2/3)*(s + 1)");
    assert_eq!(r["inputs"]["F"], "x^3");
}

#[test]
fn classic_certifies_with_default_bounds() {
    let r = json(&["bf", "classic", "x^2"]);
    assert_schema(&r);
    assert_eq!(r["status"], "CERTIFIED");
    assert_eq!(r["result"]["b"]["factored"], "(s + 1/2)*(s + 1)");
    assert_eq!(r["result"]["certificate"]["n"], 1);
}

#[test]
fn classic_with_too_small_bounds_is_uncertified() {
    // x^3 needs an operator of degree 3
    let r = json(&["bf", "classic", "x^3", "--certify", "1,2"]);
    assert_eq!(r["status"], "UNCERTIFIED");
    assert_eq!(r["result"]["b"]["factored"], "(s + 1/3)*(s + 2/3)*(s + 1)");
}

#[test]
fn simple_and_sabbah_line() {
    let r = json(&["bf", "simple", "x", "y", "--m", "0"]);
    assert_eq!(r["result"]["b"]["factored"], "(s + 1)");
    let r = json(&["bf", "sabbah-line", "x", "y", "--m", "1"]);
    assert_eq!(r["status"], "UNCERTIFIED");
    assert_eq!(r["result"]["kind"], "multiple");
}

#[test]
fn reduced_infers_degrees() {
    let r = json(&["bf", "reduced", "x^2 + y^2", "x", "--weights", "1,1"]);
    assert_eq!(r["inputs"]["d1"], 2);
    assert_eq!(r["inputs"]["d2"], 1);
    assert_eq!(r["result"]["fast_path"], true);
    assert_eq!(r["result"]["b"]["factored"], "(s + 1)");
}

#[test]
fn nc_commands() {
    let (_dir, path) = chart_file(CUSP_CHART);
    let p = path.to_str().unwrap();
    let r = json(&["nc", "bound", "--charts", p, "--m", "1"]);
    assert_eq!(r["result"]["residues"], serde_json::json!(["-1/1", "-2/3", "-1/3"]));
    let r = json(&["nc", "eigen", "--charts", p]);
    assert_eq!(r["result"]["classes"], serde_json::json!(["0/1", "1/3", "2/3"]));
}

#[test]
fn jump_and_checks() {
    let (_dir, path) = chart_file(CUSP_CHART);
    let p = path.to_str().unwrap();
    let r = json(&["jump", "nc", "--charts", p, "--upper", "1"]);
    assert_eq!(r["result"]["jumps"], serde_json::json!(["1/3", "2/3", "1/1"]));
    assert_eq!(r["result"]["lct"], "1/3");
    for args in [
        vec!["check", "thm41", "x^3", "y^2", "--m", "2", "--charts", p],
        vec!["check", "corjump", "x^3", "y^2", "--charts", p],
        vec!["check", "lemma4", "x^3", "y^2", "--m-small", "0", "--m-big", "1"],
    ] {
        let r = json(&args);
        assert_eq!(r["result"]["holds"], true, "{args:?}");
        assert_eq!(r["status"], "CERTIFIED", "{args:?}");
    }
}

#[test]
fn wrong_chart_gives_failed_check() {
    // a bound set built for x^2 cannot hold the root -1/3 of x^3
    let (_dir, path) = chart_file(r#"{"charts":[{"label":"o","a":[2,0],"b":[0,2],"kappa":[0,0]}]}"#);
    let r = json(&["check", "thm41", "x^3", "y^2", "--charts", path.to_str().unwrap()]);
    assert_eq!(r["result"]["holds"], false);
    assert_eq!(r["status"], "FAILED");
}

#[test]
fn timing_only_on_request() {
    let plain = json(&["bf", "mero", "x", "y"]);
    assert!(plain.get("timing_ms").is_none());
    let timed = json(&["--timing", "bf", "mero", "x", "y"]);
    assert!(timed["timing_ms"].is_u64());
    assert_eq!(plain["command"], timed["command"]);
}

#[test]
fn human_output_is_factored() {
    let out = mbfun(&["bf", "mero", "x^2", "y"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("status: CERTIFIED"), "{text}");
    assert!(text.contains("b: (s + 1/2)*(s + 1)"), "{text}");
}

fn assert_exit(args: &[&str], code: i32) -> String {
    let out = mbfun(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}");
    assert!(out.stdout.is_empty(), "{args:?} wrote to stdout");
    String::from_utf8(out.stderr).unwrap()
}

#[test]
fn usage_errors_exit_2() {
    assert_exit(&["bf", "mero", "x +", "y"], 2);
    assert_exit(&["bf", "mero", "s", "y"], 2);
    assert_exit(&["bf", "mero", "x", "0"], 2);
    assert_exit(&["bf", "reduced", "x^2 + y", "x", "--weights", "1,1"], 2);
    assert_exit(&["bf", "mero", "x", "y", "--certify", "0,3"], 2);
    assert_exit(&["check", "lemma4", "x", "y", "--m-small", "2", "--m-big", "1"], 2);
    assert_exit(&["frobnicate"], 2);
    let (_dir, path) = chart_file(r#"{"charts":[]}"#);
    let msg = assert_exit(&["nc", "roots", "--charts", path.to_str().unwrap()], 2);
    assert!(msg.contains("empty"), "{msg}");
    let (_dir2, two) = chart_file(
        r#"{"charts":[{"label":"a","a":[1],"b":[0],"kappa":[0]},{"label":"b","a":[2],"b":[0],"kappa":[0]}]}"#,
    );
    assert_exit(&["jump", "nc", "--charts", two.to_str().unwrap()], 2);
}

#[test]
fn bad_env_exits_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_mbfun"))
        .env("MBFUN_MAX_DEGREE", "lots")
        .args(["bf", "classic", "x"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn capability_errors_exit_1() {
    let msg = assert_exit(&["bf", "classic", "x^9"], 1);
    assert!(msg.contains("capability"), "{msg}");
}
