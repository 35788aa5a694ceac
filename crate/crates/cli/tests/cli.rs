use std::process::{Command, Output};

use serde_json::Value;

fn nestsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nestsum"))
        .args(args)
        .env_remove("NESTSUM_PREC")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap().trim_end().to_string()
}

fn schema() -> jsonschema::JSONSchema {
    let raw = include_str!("../schema/output.schema.json");
    let v: Value = serde_json::from_str(raw).unwrap();
    jsonschema::JSONSchema::compile(&v).expect("schema compiles")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = nestsum(&full);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap_or_else(|e| panic!("{args:?}: {e}: {}", stdout(&o)));
    (v, o.status.code().unwrap())
}

#[test]
fn text_output() {
    let o = nestsum(&["eval", "S[1](3)"]);
    assert_eq!(stdout(&o), "11/6");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&nestsum(&["count", "--adh", "8"])), "486");
    assert_eq!(stdout(&nestsum(&["count", "8"])), "4374");
    assert_eq!(stdout(&nestsum(&["eval", "S[1]", "--N", "3"])), "11/6");
    assert_eq!(stdout(&nestsum(&["verify", "eq7", "--N", "3"])), "OK (|Δ| < 1e-8)");
    assert_eq!(stdout(&nestsum(&["verify", "dup", "--a", "2", "--N", "4"])), "OK (exact)");
    assert_eq!(stdout(&nestsum(&["product", "S[1]", "S[2]"])), "S[1,2] + S[2,1] - S[3]");
    assert_eq!(stdout(&nestsum(&["product", "H[1]", "H[0]"])), "H[0,1] + H[1,0]");
    assert_eq!(stdout(&nestsum(&["mellin", "x^3", "--N", "1"])), "0.2");
}

#[test]
fn default_digits() {
    // 2 − 2 ln 2
    let o = nestsum(&["continue", "S[1](0.5)"]);
    assert_eq!(stdout(&o), "0.613705638880109");
    let o = nestsum(&["--prec", "30", "continue", "S[1](0.5)"]);
    assert_eq!(stdout(&o), "0.613705638880109381165535757084");
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_nestsum"))
        .args(["eval", "H[0,1](0.5)"])
        .env("NESTSUM_PREC", "25")
        .output()
        .unwrap();
    assert_eq!(stdout(&o), "0.5822405264650125059026563");
    // the flag wins
    let o = Command::new(env!("CARGO_BIN_EXE_nestsum"))
        .args(["--prec", "6", "eval", "H[0,1](0.5)"])
        .env("NESTSUM_PREC", "25")
        .output()
        .unwrap();
    assert_eq!(stdout(&o), "0.582241");
}

#[test]
fn exit_codes() {
    assert_eq!(nestsum(&["eval", "S[1"]).status.code(), Some(2));
    assert_eq!(nestsum(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(nestsum(&["eval"]).status.code(), Some(2));
    assert_eq!(nestsum(&["eval", "S[1](inf)"]).status.code(), Some(1));
    assert_eq!(nestsum(&["continue", "S[1](-2)"]).status.code(), Some(1));
    assert_eq!(nestsum(&["eval", "H[1](1)"]).status.code(), Some(1));
    assert_eq!(nestsum(&["--prec", "0", "eval", "S[1](3)"]).status.code(), Some(2));
    let o = nestsum(&["eval", "S[1,"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("byte 4"));
}

#[test]
fn json_matches_schema() {
    let schema = schema();
    let cases: &[(&[&str], i32)] = &[
        (&["eval", "S[1](3)"], 0),
        (&["eval", "S[-2,1,1](6)"], 0),
        (&["eval", "H[0,1](0.5)"], 0),
        (&["eval", "S[1](inf)"], 1),
        (&["eval", "S[2](inf)"], 0),
        (&["eval", "S[1"], 2),
        (&["limit", "S[2,1]"], 0),
        (&["limit", "S[2]({1/2})"], 0),
        (&["product", "S[1]", "S[2]"], 0),
        (&["product", "S[2]({1/2})", "S[1]({2})"], 0),
        (&["product", "S[(2,1,1)]", "S[(2,1,2)]"], 0),
        (&["product", "H[1]", "H[0]"], 0),
        (&["product", "S[1]", "H[0]"], 2),
        (&["reduce", "S[2,1]"], 0),
        (&["count", "--adh", "8"], 0),
        (&["count", "N_A(5)"], 0),
        (&["verify", "eq7", "--N", "3"], 0),
        (&["verify", "eq9"], 0),
        (&["verify", "eq18", "--x", "0.3"], 0),
        (&["verify", "dup", "--a", "-2", "--N", "5"], 0),
        (&["mellin", "x^2", "--N", "3"], 0),
        (&["mellin", "1/x", "--N", "0"], 1),
        (&["continue", "S[-2](0.5+1i)"], 0),
        (&["continue", "S[1](-3)"], 1),
    ];
    for (args, code) in cases {
        let (v, got) = json(args);
        if let Err(errors) = schema.validate(&v) {
            let msgs: Vec<String> = errors.map(|e| e.to_string()).collect();
            panic!("{args:?} -> {v}: {msgs:?}");
        }
        assert_eq!(got, *code, "{args:?} -> {v}");
        assert_eq!(v["ok"], Value::Bool(*code == 0), "{args:?}");
    }
}

#[test]
fn json_fields() {
    let (v, _) = json(&["eval", "S[1](3)"]);
    assert_eq!(v["result"]["kind"], "exact");
    assert_eq!(v["result"]["value"], "11/6");
    assert_eq!(v["result"]["decimal"], "1.83333333333333");
    let (v, _) = json(&["eval", "S[1"]);
    assert_eq!(v["error"]["kind"], "syntax");
    assert_eq!(v["error"]["offset"], 3);
    let (v, _) = json(&["count", "--adh", "8"]);
    assert_eq!(v["result"]["value"], "486");
    assert_eq!(v["result"]["family"], "N_ADH");
}

#[test]
fn deterministic() {
    for args in [&["eval", "H[0,1,-1](0.7)"][..], &["continue", "S[2](1.5+2i)"], &["limit", "S[-1,1]"]] {
        let a = nestsum(args);
        let b = nestsum(args);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.status.code(), Some(0));
    }
}
