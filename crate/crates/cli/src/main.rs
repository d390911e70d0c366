mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;
use crate::report::{emit, Outcome, EXIT_USAGE};

#[derive(Parser, Debug)]
#[command(name = "cft", version, about = "Trace, norm and normal-element generators for abelian extensions")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Common {
    /// Working precision in decimal digits (default 128, or $CFT_PRECISION).
    #[arg(long, global = true)]
    prec: Option<u32>,
    /// key=value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[arg(long, global = true)]
    tail_digits: Option<u32>,
    /// Separation tolerance (digits) for numeric generator checks.
    #[arg(long, global = true)]
    sep_digits: Option<u32>,
    /// Rounding tolerance (digits) for integer recognition.
    #[arg(long, global = true)]
    rec_digits: Option<u32>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Universal trace generator of Q(zeta_m) over Q.
    TraceGen(commands::TraceGenArgs),
    /// Universal norm generator along a tower of subfields.
    NormGen(commands::NormGenArgs),
    /// Normal element of Q(zeta_m) over Q from character sums.
    NormalElement(commands::NormalArgs),
    /// Evaluate a modular function at a point of the upper half-plane.
    Modfun(commands::ModfunArgs),
    /// Ray class fields of imaginary quadratic fields with class number one.
    Cm {
        #[command(subcommand)]
        cmd: commands::CmCmd,
    },
    /// Run the acceptance suite.
    VerifyAll(commands::VerifyArgs),
}

fn build_config(c: &Common) -> Result<RunConfig, config::ConfigError> {
    let mut cfg = RunConfig::default();
    cfg.apply_env()?;
    if let Some(path) = &c.config {
        cfg.load_file(path)?;
    }
    if let Some(p) = c.prec {
        cfg.precision = p;
    }
    if let Some(t) = c.tail_digits {
        cfg.tail_digits = Some(t);
    }
    if let Some(s) = c.sep_digits {
        cfg.separation_digits = Some(s);
    }
    if let Some(r) = c.rec_digits {
        cfg.recognition_digits = r;
    }
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if let Some(j) = &c.json {
        cfg.output = Some(j.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = match build_config(&cli.common) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("cft: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let start = Instant::now();
    let (name, outcome) = match &cli.cmd {
        Cmd::TraceGen(a) => ("trace-gen", commands::trace_gen(a, &cfg)),
        Cmd::NormGen(a) => ("norm-gen", commands::norm_gen(a, &mut cfg)),
        Cmd::NormalElement(a) => ("normal-element", commands::normal_element(a, &cfg)),
        Cmd::Modfun(a) => ("modfun", commands::modfun(a, &cfg)),
        Cmd::Cm { cmd } => ("cm", commands::cm(cmd, &cfg)),
        Cmd::VerifyAll(a) => ("verify-all", commands::verify_all(a, &cfg)),
    };
    let mut outcome = outcome.unwrap_or_else(Outcome::from_error);
    if outcome.inputs.is_null() {
        let argv: Vec<String> = std::env::args().skip(1).collect();
        outcome.inputs = serde_json::json!({ "argv": argv });
    }
    emit(name, &cfg, outcome, start.elapsed())
}
