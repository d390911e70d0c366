use clap::{Args, Subcommand, ValueEnum};
use rug::Integer;
use serde_json::{json, Value};

use cft_core::acceptance::{run_criterion, AcceptanceConfig, CRITERIA};
use cft_core::arith::euler_phi;
use cft_core::bigcomplex::BigComplex;
use cft_core::cm::{
    conjugates_report, degree_report, imag_quad, integrality_probe, normal_element_cm, rama_beta,
    verify_fm_traces, ImagQuad, ModFnSpec,
};
use cft_core::cyclotomic::{parse_rat, CycElem, SubgroupData};
use cft_core::modfunc::{
    eisenstein, eta, fm_func, fricke_f, ptog_certify, siegel_g, wp_value, EtaNorm, FracIndex,
    TauPoint,
};
use cft_core::norm_gen::{construct_norm_element, TowerData};
use cft_core::normal_elem::construct_normal_element;
use cft_core::trace_gen::construct_trace_generator_with;
use cft_core::CftError;

use crate::config::{parse_list, RunConfig};
use crate::report::{CliError, Outcome};

type Run = Result<Outcome, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Args, Debug)]
pub struct TraceGenArgs {
    #[arg(long)]
    conductor: u64,
    /// Feed N itself (not its radical) to the denominator recursion.
    #[arg(long, conflicts_with = "budget")]
    raw_budget: bool,
    /// Explicit budget; must be divisible by every prime factor of N.
    #[arg(long)]
    budget: Option<String>,
}

pub fn trace_gen(a: &TraceGenArgs, cfg: &RunConfig) -> Run {
    let budget = a
        .budget
        .as_deref()
        .map(|b| b.parse::<Integer>().map_err(|_| usage(format!("invalid budget {b:?}"))))
        .transpose()?;
    let cert = construct_trace_generator_with(a.conductor, !a.raw_budget, budget.as_ref(), cfg.generator_retries)?;
    let inputs = json!({
        "conductor": a.conductor,
        "raw_budget": a.raw_budget,
        "budget": a.budget,
    });
    let passed = cert.all_passed();
    Outcome::new(inputs, cert, passed)
}

#[derive(Args, Debug)]
pub struct NormGenArgs {
    #[arg(long)]
    conductor: u64,
    /// Subgroups H_0,...,H_t separated by commas, each given by generators
    /// joined with '+' ("full" for the whole group). Default: full,1.
    #[arg(long, allow_hyphen_values = true)]
    tower: Option<String>,
    /// Exponents n to test, e.g. 1,2,3,-1.
    #[arg(long, allow_hyphen_values = true)]
    n_set: Option<String>,
}

fn parse_subgroup(m: u64, s: &str) -> Result<SubgroupData, CliError> {
    let s = s.trim();
    if s == "full" {
        return Ok(SubgroupData::full(m));
    }
    let gens: Vec<u64> = s
        .split('+')
        .map(|t| t.trim().parse::<u64>().map_err(|_| usage(format!("invalid generator {t:?}"))))
        .collect::<Result<_, _>>()?;
    Ok(SubgroupData::generated_by(m, &gens)?)
}

pub fn norm_gen(a: &NormGenArgs, cfg: &mut RunConfig) -> Run {
    if let Some(n) = &a.n_set {
        cfg.set("n_set", n)?;
        cfg.validate()?;
    }
    let spec = a.tower.clone().unwrap_or_else(|| "full,1".into());
    let chain = spec
        .split(',')
        .map(|h| parse_subgroup(a.conductor, h))
        .collect::<Result<Vec<_>, _>>()?;
    let tower = TowerData::new(a.conductor, chain)?;
    let cert = construct_norm_element(&tower, &cfg.n_set)?;
    let inputs = json!({ "conductor": a.conductor, "tower": spec, "n_set": cfg.n_set });
    let passed = cert.all_passed();
    Outcome::new(inputs, cert, passed)
}

#[derive(Args, Debug)]
pub struct NormalArgs {
    #[arg(long)]
    conductor: u64,
    /// Power-basis coordinates of alpha ("p/q" allowed); default zeta_m.
    #[arg(long, allow_hyphen_values = true)]
    alpha_coeffs: Option<String>,
}

pub fn normal_element(a: &NormalArgs, cfg: &RunConfig) -> Run {
    let m = a.conductor;
    if m == 0 {
        return Err(CftError::ZeroConductor.into());
    }
    if euler_phi(m) < 2 {
        return Err(CftError::DegenerateExtension(m).into());
    }
    let alpha = match &a.alpha_coeffs {
        None => CycElem::zeta(m),
        Some(s) => {
            let coeffs = s.split(',').map(parse_rat).collect::<Result<Vec<_>, _>>()?;
            CycElem::from_coeffs(m, coeffs)?
        }
    };
    let cert = construct_normal_element(&alpha, m, cfg.digit_warning)?;
    let inputs = json!({ "conductor": m, "alpha": alpha });
    let passed = cert.all_passed();
    Outcome::new(inputs, cert, passed)
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Func {
    Eta,
    Siegel,
    Wp,
    Fricke,
    Fm,
    J,
    /// Weierstrass difference identity, both eta normalizations.
    Ptog,
}

#[derive(Args, Debug)]
pub struct ModfunArgs {
    #[arg(long = "fn", value_enum)]
    func: Func,
    /// RE,IM with decimal or p/q parts.
    #[arg(long, allow_hyphen_values = true)]
    tau: String,
    /// a,b,N for [a/N; b/N].
    #[arg(long, allow_hyphen_values = true)]
    index: Option<String>,
    /// Second index for ptog.
    #[arg(long, allow_hyphen_values = true)]
    index2: Option<String>,
    #[arg(long, default_value_t = 3)]
    p: u64,
    #[arg(long, default_value_t = 2)]
    m: u32,
    #[arg(long, default_value = "paper")]
    eta_norm: String,
}

fn need_index(s: &Option<String>, flag: &str) -> Result<FracIndex, CliError> {
    let s = s.as_deref().ok_or_else(|| usage(format!("--{flag} is required for this function")))?;
    Ok(FracIndex::parse(s)?)
}

pub fn modfun(a: &ModfunArgs, cfg: &RunConfig) -> Run {
    let prec = cfg.prec()?;
    let tau = TauPoint::parse(&a.tau, prec.digits.max(prec.tail_digits))?;
    let mut inputs = json!({ "fn": format!("{:?}", a.func).to_lowercase(), "tau": a.tau });
    let value = |v: BigComplex| json!({ "value": v });
    let (result, passed) = match a.func {
        Func::Eta => {
            let norm = EtaNorm::parse(&a.eta_norm)?;
            inputs["eta_norm"] = json!(norm.name());
            (value(eta(&tau, norm, &prec)?), true)
        }
        Func::Siegel => {
            let i = need_index(&a.index, "index")?;
            inputs["index"] = json!(i.to_string());
            (value(siegel_g(&i, &tau, &prec)?), true)
        }
        Func::Wp => {
            let i = need_index(&a.index, "index")?;
            inputs["index"] = json!(i.to_string());
            (value(wp_value(&i, &tau, &prec)?), true)
        }
        Func::Fricke => {
            let i = need_index(&a.index, "index")?;
            inputs["index"] = json!(i.to_string());
            (value(fricke_f(&i, &tau, &prec)?), true)
        }
        Func::Fm => {
            inputs["p"] = json!(a.p);
            inputs["m"] = json!(a.m);
            let v = fm_func(a.p, a.m, &tau, &prec)?;
            (serde_json::to_value(v)?, true)
        }
        Func::J => {
            let e = eisenstein(&tau, &prec)?;
            (serde_json::to_value(e)?, true)
        }
        Func::Ptog => {
            let i1 = need_index(&a.index, "index")?;
            let i2 = need_index(&a.index2, "index2")?;
            inputs["index"] = json!(i1.to_string());
            inputs["index2"] = json!(i2.to_string());
            let rep = ptog_certify(&i1, &i2, &tau, &prec, cfg.identity_tol())?;
            let ok = rep.certified.is_some();
            (serde_json::to_value(rep)?, ok)
        }
    };
    Outcome::new(inputs, result, passed)
}

#[derive(Args, Debug)]
pub struct CmCommon {
    #[arg(long, allow_hyphen_values = true)]
    dk: i64,
}

#[derive(Subcommand, Debug)]
pub enum CmCmd {
    /// Order of W_{K,N} and of its quotient by +-I.
    Degrees {
        #[command(flatten)]
        k: CmCommon,
        #[arg(long)]
        level: u64,
    },
    /// Conjugates of a CM value under Gal(K_(N)/K).
    Conjugates {
        #[command(flatten)]
        k: CmCommon,
        #[arg(long)]
        level: u64,
        /// Function spec, e.g. "siegel:0,1,3" (the 12N-th power) or "fm:3,2".
        #[arg(long = "fn", allow_hyphen_values = true)]
        func: Option<String>,
    },
    /// Traces of sum f_m(theta)/M_m generate K_(p^m) over K_(p).
    Thm36 {
        #[command(flatten)]
        k: CmCommon,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        n: u32,
        /// Levels m to check (default 2..=n).
        #[arg(long)]
        ms: Option<String>,
    },
    /// Norm-compatible product of Siegel powers along N_1 | N_2 | ...
    Rama {
        #[command(flatten)]
        k: CmCommon,
        #[arg(long, default_value = "3,9")]
        levels: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1,2")]
        n_set: String,
    },
    /// Normal element of K_(N)/K built from a Siegel power.
    Normal {
        #[command(flatten)]
        k: CmCommon,
        #[arg(long)]
        level: u64,
    },
    /// Integer recognition of a function's CM values.
    Probe {
        /// Discriminants, e.g. -7,-8,-11.
        #[arg(long, allow_hyphen_values = true, default_value = "-7,-8,-11")]
        dks: String,
        #[arg(long = "fn", allow_hyphen_values = true, default_value = "siegel:0,1,3")]
        func: String,
    },
}

fn field(c: &CmCommon) -> Result<ImagQuad, CliError> {
    Ok(imag_quad(c.dk)?)
}

pub fn cm(cmd: &CmCmd, cfg: &RunConfig) -> Run {
    let prec = cfg.cm_prec()?;
    let sep = cfg.separation();
    match cmd {
        CmCmd::Degrees { k, level } => {
            let rep = degree_report(&field(k)?, *level)?;
            Outcome::new(json!({ "sub": "degrees", "dk": k.dk, "level": level }), rep, true)
        }
        CmCmd::Conjugates { k, level, func } => {
            let f = func.clone().unwrap_or_else(|| format!("siegel:0,1,{level}"));
            let spec = ModFnSpec::parse(&f)?;
            let rep = conjugates_report(&spec, &field(k)?, *level, prec)?;
            Outcome::new(json!({ "sub": "conjugates", "dk": k.dk, "level": level, "fn": f }), rep, true)
        }
        CmCmd::Thm36 { k, p, n, ms } => {
            let ms: Vec<u32> = match ms {
                Some(s) => parse_list("ms", s)?,
                None => Vec::new(),
            };
            let rep = verify_fm_traces(&field(k)?, *p, *n, &ms, prec, sep)?;
            let passed = rep.passed;
            Outcome::new(json!({ "sub": "thm36", "dk": k.dk, "p": p, "n": n, "ms": ms }), rep, passed)
        }
        CmCmd::Rama { k, levels, n_set } => {
            let levels: Vec<u64> = parse_list("levels", levels)?;
            let n_set: Vec<i64> = parse_list("n_set", n_set)?;
            let rep = rama_beta(&field(k)?, &levels, &n_set, prec, sep)?;
            let passed = rep.passed;
            Outcome::new(json!({ "sub": "rama", "dk": k.dk, "levels": levels, "n_set": n_set }), rep, passed)
        }
        CmCmd::Normal { k, level } => {
            let rep = normal_element_cm(&field(k)?, *level, prec, sep, cfg.recognition_digits, cfg.max_cm_degree)?;
            let passed = rep.passed;
            Outcome::new(json!({ "sub": "normal", "dk": k.dk, "level": level }), rep, passed)
        }
        CmCmd::Probe { dks, func } => {
            let ds: Vec<i64> = parse_list("dks", dks)?;
            let ks = ds.iter().map(|&d| imag_quad(d)).collect::<Result<Vec<_>, _>>()?;
            let spec = ModFnSpec::parse(func)?;
            let rep = integrality_probe(&spec, &ks, prec, cfg.recognition_digits)?;
            let passed = rep.all_integral;
            Outcome::new(json!({ "sub": "probe", "dks": ds, "fn": func }), rep, passed)
        }
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Criteria to run, e.g. 1,5,12 (default all).
    #[arg(long)]
    only: Option<String>,
}

pub fn verify_all(a: &VerifyArgs, cfg: &RunConfig) -> Run {
    let ids: Vec<usize> = match &a.only {
        Some(s) => parse_list("only", s)?,
        None => (1..=CRITERIA).collect(),
    };
    if let Some(bad) = ids.iter().find(|&&i| i == 0 || i > CRITERIA) {
        return Err(usage(format!("no acceptance criterion {bad}")));
    }
    let acfg = AcceptanceConfig {
        digits: cfg.precision,
        seed: cfg.seed,
    };
    let mut results = Vec::new();
    let mut timings = serde_json::Map::new();
    for &id in &ids {
        let t = run_criterion(id, &acfg)?;
        eprintln!("{}", t.line());
        timings.insert(
            format!("criterion_{id:02}"),
            json!({
                "seconds": format!("{:.3}", t.elapsed.as_secs_f64()),
                "within_budget": t.within_budget(),
            }),
        );
        results.push(t.result);
    }
    let passed = results.iter().all(|r| r.passed);
    let summary: Vec<Value> = results
        .iter()
        .map(|r| json!({ "id": r.id, "passed": r.passed }))
        .collect();
    let mut out = Outcome::new(
        json!({ "criteria": ids }),
        json!({ "summary": summary, "criteria": results }),
        passed,
    )?;
    out.timings = timings;
    Ok(out)
}
