//! End-to-end tests of the binary: exit codes, JSON emission, and
//! byte-for-byte reproducibility across invocations.

use std::io::Write;
use std::process::{Command, Stdio};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_singeq")
}

const BASE: &str = "\
FIELD prime 32003
QUIVER A2
  VERTICES v
  ARROW x: v -> v
  REL x*x
END
";

fn run_with_file(text: &str, extra: &[&str]) -> (i32, String, String) {
    let dir = std::env::temp_dir();
    let path = dir.join(format!(
        "singeq-test-{}-{:x}.sw",
        std::process::id(),
        text.len() as u64 + extra.len() as u64 * 7919
    ));
    std::fs::write(&path, text).unwrap();
    let out = Command::new(bin())
        .arg(&path)
        .args(extra)
        .output()
        .expect("binary runs");
    std::fs::remove_file(&path).ok();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn exit_zero_when_all_pass() {
    let text =
        format!("{BASE}TASK check-algebra A2\nTASK verify-witness A2 A2 regular:A2 regular:A2 0\n");
    let (code, stdout, _) = run_with_file(&text, &[]);
    assert_eq!(code, 0, "stdout: {stdout}");
    assert!(stdout.contains("pass"));
}

#[test]
fn exit_one_on_refuted_task() {
    let text = format!("{BASE}TASK verify-witness A2 A2 regular:A2 regular:A2 1\n");
    let (code, stdout, _) = run_with_file(&text, &[]);
    assert_eq!(code, 1, "stdout: {stdout}");
}

#[test]
fn exit_two_on_unresolved_task() {
    let text = format!("{BASE}TASK pd simple:A2:0 CUTOFF 10\n");
    let (code, _, _) = run_with_file(&text, &[]);
    assert_eq!(code, 2);
}

#[test]
fn exit_three_on_parse_error() {
    let (code, _, stderr) = run_with_file("NONSENSE directive\n", &[]);
    assert_eq!(code, 3);
    assert!(stderr.contains("error"));
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    let text = format!(
        "{BASE}TASK verify-witness A2 A2 envsyzygy:A2:1 regular:A2 1 SEED 42\nTASK sing-equiv regular:A2 SEED 3\n"
    );
    let dir = std::env::temp_dir();
    let j1 = dir.join(format!("singeq-rep1-{}.json", std::process::id()));
    let j2 = dir.join(format!("singeq-rep2-{}.json", std::process::id()));
    let p = dir.join(format!("singeq-rep-{}.sw", std::process::id()));
    std::fs::write(&p, &text).unwrap();
    for j in [&j1, &j2] {
        let st = Command::new(bin())
            .arg(&p)
            .arg("--json")
            .arg(j)
            .output()
            .unwrap();
        assert_eq!(st.status.code(), Some(0));
    }
    let b1 = std::fs::read(&j1).unwrap();
    let b2 = std::fs::read(&j2).unwrap();
    assert_eq!(b1, b2, "JSON reports differ between runs");
    assert!(!b1.is_empty());
    let parsed: serde_json::Value = serde_json::from_slice(&b1).unwrap();
    assert_eq!(parsed["schema"], 1);
    assert_eq!(parsed["reports"][0]["verdict"], "pass");
    assert_eq!(parsed["reports"][0]["level"], 1);
    for f in [&j1, &j2, &p] {
        std::fs::remove_file(f).ok();
    }
}

#[test]
fn stdin_and_parallel_flags() {
    let text = format!("{BASE}TASK vdim A2\nTASK gorenstein A2\nTASK check-algebra A2\n");
    let mut child = Command::new(bin())
        .arg("-")
        .arg("--parallel")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(text.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    // Output order follows task order even in parallel mode.
    let pos_vdim = stdout.find("[0] vdim").unwrap();
    let pos_check = stdout.find("[2] check-algebra").unwrap();
    assert!(pos_vdim < pos_check);
}

#[test]
fn demo_workspace_covers_every_task_kind() {
    let text = include_str!("fixtures/demo.sw");
    let ws = singeq::workspace::parse_workspace(text, None).unwrap();
    let mut kinds: Vec<&str> = ws.tasks.iter().map(|t| t.kind.as_str()).collect();
    kinds.sort_unstable();
    kinds.dedup();
    assert_eq!(kinds.len(), singeq::workspace::TASK_KINDS.len());
    let (_, json, exit) = singeq::tasks::run_text(text, None, None, None, false).unwrap();
    assert_eq!(exit, 0, "demo workspace must pass fully");
    // Serialization round-trips the whole workspace.
    let re = singeq::workspace::serialize(&ws);
    let ws2 = singeq::workspace::parse_workspace(&re, None).unwrap();
    assert!(singeq::workspace::workspace_eq(&ws, &ws2));
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed["reports"].as_array().unwrap().len(), ws.tasks.len());
}

#[test]
fn field_override_flag() {
    let text = format!("{BASE}TASK check-algebra A2\n");
    let (code, _, _) = run_with_file(&text, &["--field", "rational"]);
    assert_eq!(code, 0);
    let (code, _, stderr) = run_with_file(&text, &["--field", "prime:6"]);
    assert_eq!(code, 3, "6 is not prime: {stderr}");
}
