//! One line per acceptance criterion; exits nonzero if any criterion fails.

use std::process::ExitCode;

use cft_core::acceptance::{run_criterion, AcceptanceConfig, CRITERIA};

fn main() -> ExitCode {
    let cfg = AcceptanceConfig::default();
    let mut failed = Vec::new();
    for id in 1..=CRITERIA {
        let t = run_criterion(id, &cfg).expect("criterion id in range");
        println!("{}", t.line());
        if !t.within_budget() {
            println!("    note: over the time budget");
        }
        if !t.result.passed {
            println!("    {}", t.result.detail);
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: {CRITERIA}/{CRITERIA} passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
