use std::process::{Command, Output};

use serde_json::Value;

fn strprod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strprod"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(strprod(&["check", "a4*a3 = a6*a1"]).status.code(), Some(0));
    assert_eq!(strprod(&["check", "a3*a4 = a5*a1"]).status.code(), Some(1));
    assert_eq!(strprod(&["check", "a4*a3 = "]).status.code(), Some(2));
    assert_eq!(strprod(&["check"]).status.code(), Some(2));
    assert_eq!(strprod(&["--format", "yaml", "canon", "a3"]).status.code(), Some(2));
    assert_eq!(strprod(&["eval", "a5", "--a1", "1", "--r", "2", "--max-index", "4"]).status.code(), Some(2));
    assert_eq!(strprod(&["family", "--t", "3", "--sum", "100", "--max-index", "4"]).status.code(), Some(0));
    assert_eq!(strprod(&["--help"]).status.code(), Some(0));
}

#[test]
fn check_output() {
    let out = strprod(&["check", "a4*a3 = a6*a1"]);
    assert_eq!(stdout(&out), "verified: T=2, S=7 on both sides\n");

    let out = strprod(&["check", "a3*a4 = a5*a1"]);
    assert_eq!(stdout(&out), "refuted: lhs T=2, S=7; rhs T=2, S=6\n");

    let out = strprod(&["check", "a5*a2^(1/2) = a4^(3/2)", "--trials", "50", "--seed", "9"]);
    let text = stdout(&out);
    assert!(text.starts_with("verified: T=3/2, S=6 on both sides\nnumeric: pass, 50 trials"), "{text}");

    let out = strprod(&["--format", "latex", "check", "a4*a3 = a6*a1"]);
    assert_eq!(stdout(&out), "a_{3} \\cdot a_{4} = a_{1} \\cdot a_{6}\nverified: T=2, S=7 on both sides\n");
}

#[test]
fn parse_error_points_at_offset() {
    let out = strprod(&["canon", "a3*b4"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("at byte 3"), "{err}");
    assert!(err.contains("  a3*b4\n     ^"), "{err}");
}

#[test]
fn canon_collapse_eval_text() {
    assert_eq!(stdout(&strprod(&["canon", "a4 * a3 * a3"])), "a3^(2)*a4\nT=3, S=10\n");
    assert_eq!(stdout(&strprod(&["canon", "a7*a7^-1"])), "1\nT=0, S=0\n");
    assert_eq!(stdout(&strprod(&["collapse", "a3*a5"])), "a4^(2)\n");
    assert_eq!(stdout(&strprod(&["collapse", "a2*a5"])), "none\n");
    assert_eq!(stdout(&strprod(&["eval", "a3*a4", "--a1", "1", "--r", "2"])), "32\n");
    assert_eq!(stdout(&strprod(&["eval", "a3*a4", "--a1", "2", "--r", "1"])), "4\n");
}

#[test]
fn family_and_decompose_text() {
    let out = strprod(&["family", "--t", "2", "--sum", "7", "--max-index", "6"]);
    assert_eq!(stdout(&out), "1+6\n2+5\n3+4\n");
    let out = strprod(&["family", "--t", "3", "--sum", "12", "--max-index", "8", "--repetition"]);
    assert_eq!(stdout(&out).lines().count(), 10);
    let out = strprod(&["decompose", "--t", "3", "--sum", "12", "--parts", "2", "--max-index", "8"]);
    assert_eq!(stdout(&out), "a2*a5^(2)\na2^(2)*a8\na3^(2)*a6\n");
    let out = strprod(&["--format", "latex", "decompose", "--t", "2", "--sum", "8", "--parts", "1", "--max-index", "8"]);
    assert_eq!(stdout(&out), "a_{4}^{2}\n");
}

#[test]
fn every_subcommand_emits_valid_json() {
    let cases: &[&[&str]] = &[
        &["check", "a3^(6pi) * a6^6 = a2^(5pi+2) * a8^(pi+4)", "--trials", "20"],
        &["check", "a3*a4 = a5*a1"],
        &["check", "a3*"],
        &["canon", "a5*a2^(1/2)"],
        &["family", "--t", "2", "--sum", "7", "--max-index", "6"],
        &["family", "--t", "2", "--sum", "1", "--max-index", "6"],
        &["decompose", "--t", "3", "--sum", "12", "--parts", "2", "--max-index", "8"],
        &["collapse", "a3*a5"],
        &["collapse", "a2*a5"],
        &["solve", "--indices", "5,2", "--target", "4", "--total", "3/2"],
        &["solve", "--indices", "5,5", "--target", "4", "--total", "3/2"],
        &["eval", "a3*a4", "--a1", "1", "--r", "2"],
        &["eval", "a3*a4", "--a1", "-1", "--r", "2"],
        &["family", "--sum", "7"],
        &["nonsense"],
    ];
    for args in cases {
        let mut full = vec!["--format", "json"];
        full.extend_from_slice(args);
        let out = strprod(&full);
        let text = stdout(&out);
        let parsed: Result<Value, _> = serde_json::from_str(&text);
        assert!(parsed.is_ok(), "{args:?} gave {text:?}");
        if out.status.code() == Some(2) {
            assert!(parsed.unwrap()["error"]["message"].is_string(), "{args:?}");
        }
    }
}

#[test]
fn json_payloads() {
    let v: Value = serde_json::from_str(&stdout(&strprod(&[
        "--format", "json", "family", "--t", "2", "--sum", "7", "--max-index", "6",
    ])))
    .unwrap();
    assert_eq!(v, serde_json::json!([[1, 6], [2, 5], [3, 4]]));

    let v: Value = serde_json::from_str(&stdout(&strprod(&[
        "--format", "json", "decompose", "--t", "3", "--sum", "12", "--parts", "2", "--max-index", "8",
    ])))
    .unwrap();
    assert_eq!(v[0], serde_json::json!({"parts":[{"index":2,"weight":1},{"index":5,"weight":2}]}));

    let v: Value = serde_json::from_str(&stdout(&strprod(&["--format", "json", "canon", "a3^(6pi)"]))).unwrap();
    assert_eq!(v["product"], serde_json::json!({"factors":[{"index":3,"exp":{"rat":"0","pi":"6"}}]}));
    assert_eq!(v["signature"], serde_json::json!({"T":"6*pi","S":"18*pi"}));

    let v: Value = serde_json::from_str(&stdout(&strprod(&[
        "--format", "json", "check", "a4*a3 = a6*a1", "--trials", "1000",
    ])))
    .unwrap();
    assert_eq!(v["verdict"], "verified");
    assert_eq!(v["numeric"]["verdict"], "pass");
    assert_eq!(v["numeric"]["trials"], 1000);
    assert_eq!(v["numeric"]["skipped"], 0);

    let v: Value = serde_json::from_str(&stdout(&strprod(&[
        "--format", "json", "solve", "--indices", "5,2", "--target", "4", "--total", "3/2",
    ])))
    .unwrap();
    assert_eq!(v["w1"], "1");
    assert_eq!(v["w2"], "1/2");
    assert_eq!(v["verified"], true);
}

#[test]
fn same_argv_same_bytes() {
    let args = ["--format", "json", "check", "a5*a2^(1/2) = a4^(3/2)", "--trials", "300", "--seed", "77"];
    assert_eq!(strprod(&args).stdout, strprod(&args).stdout);
    let args = ["family", "--t", "4", "--sum", "60", "--max-index", "30"];
    assert_eq!(strprod(&args).stdout, strprod(&args).stdout);
}

#[test]
fn quiet_keeps_exit_code() {
    let out = strprod(&["--quiet", "check", "a3*a4 = a5*a1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}
