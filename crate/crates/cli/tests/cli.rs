use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn cft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cft"))
        .args(args)
        .env_remove("CFT_PRECISION")
        .output()
        .expect("spawn cft")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn trace_gen_five() {
    let out = cft(&["trace-gen", "--conductor", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let fields = v["result"]["fields"].as_array().unwrap();
    assert_eq!(fields.len(), 2);
    assert!(fields.iter().all(|f| f["generates"] == true));
    assert_eq!(v["result"]["budget_radical"], "10");
    assert_eq!(v["result"]["denominators"], serde_json::json!(["11", "111"]));
}

#[test]
fn degenerate_and_usage_errors_exit_two() {
    assert_eq!(cft(&["trace-gen", "--conductor", "2"]).status.code(), Some(2));
    assert_eq!(cft(&["trace-gen"]).status.code(), Some(2));
    assert_eq!(cft(&["cm", "degrees", "--dk", "-4", "--level", "3"]).status.code(), Some(2));
    assert_eq!(cft(&["modfun", "--fn", "siegel", "--tau", "0,1"]).status.code(), Some(2));
    assert_eq!(cft(&["verify-all", "--only", "13"]).status.code(), Some(2));
}

#[test]
fn cm_degrees() {
    let out = cft(&["cm", "degrees", "--dk", "-7", "--level", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["order"], "8");
    assert_eq!(v["result"]["quotient"], "4");
}

fn without_timings(out: &Output) -> Value {
    let mut v = json(out);
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn reports_are_deterministic() {
    let args = ["normal-element", "--conductor", "4"];
    let (a, b) = (cft(&args), cft(&args));
    assert_eq!(without_timings(&a), without_timings(&b));
    let args = ["cm", "thm36", "--dk", "-7", "--prec", "40"];
    let (a, b) = (cft(&args), cft(&args));
    assert_eq!(serde_json::to_string(&without_timings(&a)).unwrap(), serde_json::to_string(&without_timings(&b)).unwrap());
}

#[test]
fn numbers_are_strings() {
    fn check(v: &Value) {
        match v {
            Value::Number(_) => panic!("bare number in report"),
            Value::Array(a) => a.iter().for_each(check),
            Value::Object(o) => o.values().for_each(check),
            _ => {}
        }
    }
    check(&json(&cft(&["cm", "rama", "--dk", "-7", "--prec", "40"])));
    check(&json(&cft(&["norm-gen", "--conductor", "5", "--tower", "full,4,1"])));
}

#[test]
fn precision_sources() {
    let cfg = tmp("prec.cfg");
    std::fs::write(&cfg, "# comment\nprecision = 48\nrecognition_digits = 15\n").unwrap();
    let v = json(&cft(&["--config", cfg.to_str().unwrap(), "cm", "degrees", "--dk", "-7", "--level", "2"]));
    assert_eq!(v["config"]["precision"], "48");
    assert_eq!(v["config"]["recognition_digits"], "15");
    let v = json(&cft(&["--config", cfg.to_str().unwrap(), "--prec", "50", "modfun", "--fn", "j", "--tau", "0,1"]));
    assert_eq!(v["config"]["precision"], "50");
    let out = Command::new(env!("CARGO_BIN_EXE_cft"))
        .args(["modfun", "--fn", "j", "--tau", "0,1"])
        .env("CFT_PRECISION", "36")
        .output()
        .unwrap();
    assert_eq!(json(&out)["config"]["precision"], "36");
    let out = Command::new(env!("CARGO_BIN_EXE_cft"))
        .args(["cm", "degrees", "--dk", "-7", "--level", "3"])
        .env("CFT_PRECISION", "20")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(&cfg, "colour = red\n").unwrap();
    assert_eq!(cft(&["--config", cfg.to_str().unwrap(), "trace-gen", "--conductor", "5"]).status.code(), Some(2));
}

#[test]
fn json_file_output() {
    let path = tmp("trace7.json");
    let out = cft(&["trace-gen", "--conductor", "7", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn failed_check_exits_one_with_report() {
    // 40 digits cannot certify a residual of 10^-200
    let cfg = tmp("strict.cfg");
    std::fs::write(&cfg, "identity_digits = 200\n").unwrap();
    let out = cft(&[
        "--config", cfg.to_str().unwrap(), "--prec", "40",
        "modfun", "--fn", "ptog", "--tau", "1/10,6/5", "--index", "0,1,3", "--index2", "1,0,3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    assert!(v["result"]["paper"]["residual_log10"].is_string());
}

#[test]
fn verify_all_subset() {
    let out = cft(&["verify-all", "--only", "2,8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["summary"].as_array().unwrap().len(), 2);
    assert!(v["timings"]["criterion_02"]["seconds"].is_string());
}
