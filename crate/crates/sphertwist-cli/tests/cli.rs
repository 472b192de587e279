use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

fn sphertwist(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sphertwist"));
    cmd.args(args).env_remove("SPHERTWIST_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("sphertwist-{}-{name}", std::process::id()));
    std::fs::File::create(&path).unwrap().write_all(contents.as_bytes()).unwrap();
    path
}

#[test]
fn clean_scenario_exits_zero() {
    let o = sphertwist(&["report", fixture("fix_ut2").to_str().unwrap()], &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("scenario"));
}

#[test]
fn cap_exceeded_exits_three() {
    let o = sphertwist(&["report", fixture("fix_a").to_str().unwrap()], &[]);
    assert_eq!(code(&o), 3);
}

#[test]
fn failed_check_exits_four() {
    let o = sphertwist(&["tilting", fixture("fix_ctx1").to_str().unwrap()], &[]);
    assert_eq!(code(&o), 4);
    let o = sphertwist(&["spherical", fixture("fix_ctx1").to_str().unwrap()], &[]);
    assert_eq!(code(&o), 0);
}

#[test]
fn validate_echoes_without_sections() {
    let o = sphertwist(&["validate", "--format", "json", fixture("fix_ctx3").to_str().unwrap()], &[]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["sections"], serde_json::json!([]));
    assert_eq!(v["scenario"]["context"]["nonprojective_summands"], 3);
    assert_eq!(v["summary"]["exit_code"], 0);
}

#[test]
fn json_report_parses_and_matches_the_exit_code() {
    let o = sphertwist(&["tor", "--format", "json", fixture("fix_ctx1").to_str().unwrap()], &[]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["summary"]["exit_code"], code(&o));
    assert_eq!(v["sections"][0]["audit"], "tor");
}

#[test]
fn window_and_cap_overrides_reach_the_report() {
    let o = sphertwist(&["twist", "--format", "json", "--window", "-1,3", "--cap", "5", fixture("fix_ctx1").to_str().unwrap()], &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["scenario"]["window"], serde_json::json!([-1, 3]));
    assert_eq!(v["scenario"]["cap"], 5);
}

#[test]
fn bad_inputs_exit_two() {
    let text = std::fs::read_to_string(fixture("fix_ctx1")).unwrap();
    let truncated = temp_file("truncated.json", &text[..text.len() / 2]);
    let o = sphertwist(&["report", truncated.to_str().unwrap()], &[]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    let schema = temp_file("schema.json", r#"{"field": {"prime": 9}}"#);
    let o = sphertwist(&["report", schema.to_str().unwrap()], &[]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("schema error"));

    let class = temp_file(
        "class.json",
        r#"{"field": "rational", "algebra": {"kind": "nakayama", "vertices": 1, "loewy_length": 2}, "modules": {"S": {"kind": "simple", "class": 3}}}"#,
    );
    let o = sphertwist(&["validate", class.to_str().unwrap()], &[]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("schema error at line 1") && err.contains("out of range"), "{err}");

    let o = sphertwist(&["report", "/nonexistent/scenario.json"], &[]);
    assert_eq!(code(&o), 2);

    let o = sphertwist(&["report", fixture("fix_ut2").to_str().unwrap()], &[("SPHERTWIST_THREADS", "zero")]);
    assert_eq!(code(&o), 2);

    for p in [truncated, schema, class] {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let path = fixture("fix_ctx3");
    let one = sphertwist(&["report", path.to_str().unwrap()], &[("SPHERTWIST_THREADS", "1")]);
    let four = sphertwist(&["report", path.to_str().unwrap()], &[("SPHERTWIST_THREADS", "4")]);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(code(&one), code(&four));
}
