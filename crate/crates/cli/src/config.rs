//! Run configuration: defaults, then CFT_PRECISION, then a key=value
//! file, then command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use cft_core::bigcomplex::Prec;
use cft_core::norm_gen::DEFAULT_N_SET;
use cft_core::normal_elem::DEFAULT_M_DIGIT_WARNING;
use cft_core::trace_gen::DEFAULT_GENERATOR_RETRIES;

pub const PRECISION_ENV: &str = "CFT_PRECISION";
pub const DEFAULT_PRECISION: u32 = 128;
pub const MIN_CM_PRECISION: u32 = 32;

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    /// Working precision in decimal digits.
    pub precision: u32,
    /// q-series truncation target; precision + 10 when unset.
    pub tail_digits: Option<u32>,
    pub n_set: Vec<i64>,
    pub generator_retries: usize,
    /// Conjugates count as distinct when relatively separated by more than
    /// 10^-separation_digits; precision / 2 when unset.
    pub separation_digits: Option<u32>,
    /// Rounding tolerance for integer recognition.
    pub recognition_digits: u32,
    /// Residual tolerance for the Weierstrass difference identity;
    /// precision - 12 when unset.
    pub identity_digits: Option<u32>,
    pub digit_warning: usize,
    pub max_cm_degree: usize,
    pub seed: u64,
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision: DEFAULT_PRECISION,
            tail_digits: None,
            n_set: DEFAULT_N_SET.to_vec(),
            generator_retries: DEFAULT_GENERATOR_RETRIES,
            separation_digits: None,
            recognition_digits: 20,
            identity_digits: None,
            digit_warning: DEFAULT_M_DIGIT_WARNING,
            max_cm_degree: 12,
            seed: 20_240_601,
            output: None,
        }
    }
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.trim()
        .parse()
        .map_err(|_| ConfigError(format!("invalid value {v:?} for {key}")))
}

pub fn parse_list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>, ConfigError> {
    v.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_num(key, t))
        .collect()
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key.trim().replace('-', "_").as_str() {
            "precision" | "prec" => self.precision = parse_num(key, value)?,
            "tail_digits" => self.tail_digits = Some(parse_num(key, value)?),
            "n_set" => self.n_set = parse_list(key, value)?,
            "generator_retries" | "retries" => self.generator_retries = parse_num(key, value)?,
            "separation_digits" => self.separation_digits = Some(parse_num(key, value)?),
            "recognition_digits" => self.recognition_digits = parse_num(key, value)?,
            "identity_digits" => self.identity_digits = Some(parse_num(key, value)?),
            "digit_warning" => self.digit_warning = parse_num(key, value)?,
            "max_cm_degree" => self.max_cm_degree = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "json" | "output" => self.output = Some(PathBuf::from(value.trim())),
            other => return Err(ConfigError(format!("unknown configuration key {other:?}"))),
        }
        Ok(())
    }

    pub fn apply_env(&mut self) -> Result<(), ConfigError> {
        if let Ok(v) = std::env::var(PRECISION_ENV) {
            self.precision = parse_num(PRECISION_ENV, &v)?;
        }
        Ok(())
    }

    /// Lines of `key = value`; blank lines and `#` comments are skipped.
    pub fn load_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("{}:{}: expected key=value", path.display(), no + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn prec(&self) -> Result<Prec, ConfigError> {
        let p = Prec::new(self.precision).map_err(|e| ConfigError(e.to_string()))?;
        Ok(match self.tail_digits {
            Some(t) => p.with_tail(t),
            None => p,
        })
    }

    pub fn cm_prec(&self) -> Result<Prec, ConfigError> {
        if self.precision < MIN_CM_PRECISION {
            return Err(ConfigError(format!(
                "CM subcommands need at least {MIN_CM_PRECISION} digits, got {}",
                self.precision
            )));
        }
        self.prec()
    }

    pub fn separation(&self) -> u32 {
        self.separation_digits.unwrap_or(self.precision / 2)
    }

    pub fn identity_tol(&self) -> u32 {
        self.identity_digits.unwrap_or(self.precision.saturating_sub(12))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_set.is_empty() || self.n_set.contains(&0) {
            return Err(ConfigError("n-set must be nonempty and exclude 0".into()));
        }
        self.prec().map(|_| ())
    }
}
