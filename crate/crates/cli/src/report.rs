//! Report assembly: every number becomes a string, keys are sorted, and
//! wall-clock timings live in their own section.

use std::fs;
use std::process::ExitCode;
use std::time::Duration;

use serde::Serialize;
use serde_json::{json, Map, Value};

use cft_core::CftError;

use crate::config::{ConfigError, RunConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug)]
pub enum CliError {
    Core(CftError),
    Usage(String),
}

impl From<CftError> for CliError {
    fn from(e: CftError) -> Self {
        CliError::Core(e)
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Usage(e.0)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(format!("serialization: {e}"))
    }
}

/// Failures of a construction or a numeric check exit with 1; anything the
/// caller could fix by changing the input exits with 2.
pub fn exit_code(e: &CftError) -> u8 {
    match e {
        CftError::VerificationFailed(_)
        | CftError::SeparationTooTight { .. }
        | CftError::RecognitionFailed { .. }
        | CftError::GeneratorSearchExhausted(_) => EXIT_FAILED,
        _ => EXIT_USAGE,
    }
}

fn error_kind(e: &CftError) -> &'static str {
    match e {
        CftError::ZeroConductor => "ZeroConductor",
        CftError::DivisionByZero => "DivisionByZero",
        CftError::NotAUnit { .. } => "NotAUnit",
        CftError::DegenerateExtension(_) => "DegenerateExtension",
        CftError::ConductorMismatch(..) => "ConductorMismatch",
        CftError::InvalidSubgroup(_) => "InvalidSubgroup",
        CftError::NotInField => "NotInField",
        CftError::NotAGenerator => "NotAGenerator",
        CftError::NotAlgebraicInteger => "NotAlgebraicInteger",
        CftError::GeneratorSearchExhausted(_) => "GeneratorSearchExhausted",
        CftError::VerificationFailed(_) => "VerificationFailed",
        CftError::EmptyInput => "EmptyInput",
        CftError::InvalidTower(_) => "InvalidTower",
        CftError::PrecisionUnreachable(_) => "PrecisionUnreachable",
        CftError::LatticePoint => "LatticePoint",
        CftError::IndexCollision => "IndexCollision",
        CftError::InvalidIndex(_) => "InvalidIndex",
        CftError::DenominatorVanishes(_) => "DenominatorVanishes",
        CftError::UnsupportedDiscriminant(..) => "UnsupportedDiscriminant",
        CftError::LevelMismatch { .. } => "LevelMismatch",
        CftError::RecognitionFailed { .. } => "RecognitionFailed",
        CftError::SeparationTooTight { .. } => "SeparationTooTight",
        CftError::InvalidArgument(_) => "InvalidArgument",
    }
}

pub struct Outcome {
    pub inputs: Value,
    pub result: Value,
    pub passed: bool,
    pub error: Option<Value>,
    pub exit: u8,
    pub timings: Map<String, Value>,
}

impl Outcome {
    pub fn new(inputs: Value, result: impl Serialize, passed: bool) -> Result<Self, CliError> {
        Ok(Outcome {
            inputs,
            result: serde_json::to_value(result)?,
            passed,
            error: None,
            exit: if passed { EXIT_OK } else { EXIT_FAILED },
            timings: Map::new(),
        })
    }

    pub fn from_error(e: CliError) -> Self {
        let (error, exit) = match &e {
            CliError::Core(c) => (json!({ "kind": error_kind(c), "message": c.to_string() }), exit_code(c)),
            CliError::Usage(m) => (json!({ "kind": "Usage", "message": m }), EXIT_USAGE),
        };
        Outcome {
            inputs: Value::Null,
            result: Value::Null,
            passed: false,
            error: Some(error),
            exit,
            timings: Map::new(),
        }
    }
}

/// Replaces every JSON number by its decimal string.
pub fn stringify_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(a) => Value::Array(a.into_iter().map(stringify_numbers).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, stringify_numbers(v))).collect()),
        other => other,
    }
}

pub fn render(command: &str, cfg: &RunConfig, outcome: &Outcome, elapsed: Duration) -> String {
    let mut timings = outcome.timings.clone();
    timings.insert("total_seconds".into(), json!(format!("{:.3}", elapsed.as_secs_f64())));
    let body = json!({
        "command": command,
        "config": cfg,
        "inputs": outcome.inputs,
        "passed": outcome.passed,
        "result": outcome.result,
        "error": outcome.error,
        "timings": Value::Object(timings),
    });
    let mut s = serde_json::to_string_pretty(&stringify_numbers(body)).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn emit(command: &str, cfg: &RunConfig, outcome: Outcome, elapsed: Duration) -> ExitCode {
    let text = render(command, cfg, &outcome, elapsed);
    match &cfg.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("cft: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE);
            }
            eprintln!(
                "cft {command}: {} ({})",
                if outcome.passed { "passed" } else { "FAILED" },
                path.display()
            );
        }
        None => print!("{text}"),
    }
    if let Some(err) = &outcome.error {
        eprintln!("cft: {}", err["message"].as_str().unwrap_or("error"));
    }
    ExitCode::from(outcome.exit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_become_strings() {
        let v = stringify_numbers(json!({ "a": 1, "b": [2.5, "x", { "c": -3 }], "d": true }));
        assert_eq!(v, json!({ "a": "1", "b": ["2.5", "x", { "c": "-3" }], "d": true }));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&CftError::DegenerateExtension(2)), EXIT_USAGE);
        assert_eq!(exit_code(&CftError::VerificationFailed("x".into())), EXIT_FAILED);
    }
}
