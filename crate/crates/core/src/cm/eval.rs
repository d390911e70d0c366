//! Function specs, cached CM evaluation and Galois conjugates.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use rug::ops::Pow;
use rug::Integer;
use serde::Serialize;

use super::field::{act_on_index, w_group, ImagQuad, WGroup, WMatrix};
use crate::arith::{is_prime, lcm};
use crate::bigcomplex::{BigComplex, Prec};
use crate::error::{CftError, Result};
use crate::modfunc::{eisenstein, fricke_with, fm_func, siegel_g, EisensteinData, FmValue, FracIndex, TauPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Atom {
    /// g_[r;s]^{12N}, N the stated level of the index.
    Siegel { idx: FracIndex },
    Fricke { idx: FracIndex },
    /// f_m for the odd prime p, level p^m.
    Fm { p: u64, m: u32 },
    J,
}

impl Atom {
    pub fn level(&self) -> u64 {
        match self {
            Atom::Siegel { idx } | Atom::Fricke { idx } => idx.n,
            Atom::Fm { p, m } => p.pow(*m),
            Atom::J => 1,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Siegel { idx } => write!(f, "siegel:{},{},{}", idx.a, idx.b, idx.n),
            Atom::Fricke { idx } => write!(f, "fricke:{},{},{}", idx.a, idx.b, idx.n),
            Atom::Fm { p, m } => write!(f, "fm:{p},{m}"),
            Atom::J => write!(f, "j"),
        }
    }
}

/// coeff * prod atom^exp. Written as factors joined by '*', each
/// `siegel:a,b,N`, `fricke:a,b,N`, `fm:p,m`, `j` or an integer, with an
/// optional `^e`. `siegel:a,b,N` stands for g_[a/N; b/N]^{12N}.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModFnSpec {
    #[serde(serialize_with = "crate::report::ser_int")]
    pub coeff: Integer,
    pub factors: Vec<(Atom, i64)>,
}

impl ModFnSpec {
    pub fn atom(a: Atom) -> Self {
        ModFnSpec {
            coeff: Integer::from(1),
            factors: vec![(a, 1)],
        }
    }

    pub fn siegel12n(idx: FracIndex) -> Self {
        Self::atom(Atom::Siegel { idx })
    }

    pub fn level(&self) -> u64 {
        self.factors.iter().fold(1, |l, (a, _)| lcm(l, a.level()))
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = |why: &str| CftError::InvalidArgument(format!("function spec {s:?}: {why}"));
        let mut coeff = Integer::from(1);
        let mut factors = Vec::new();
        for raw in s.split('*') {
            let raw = raw.trim();
            if raw.is_empty() {
                return Err(bad("empty factor"));
            }
            let (body, exp) = match raw.rsplit_once('^') {
                Some((b, e)) => (b.trim(), e.trim().parse::<i64>().map_err(|_| bad("bad exponent"))?),
                None => (raw, 1),
            };
            if let Ok(c) = body.parse::<Integer>() {
                if exp < 0 {
                    return Err(bad("negative power of a constant"));
                }
                coeff *= c.pow(exp as u32);
                continue;
            }
            let (name, args) = body.split_once(':').unwrap_or((body, ""));
            let nums: Vec<i64> = if args.is_empty() {
                Vec::new()
            } else {
                args.split(',')
                    .map(|t| t.trim().parse::<i64>().map_err(|_| bad("bad argument")))
                    .collect::<Result<_>>()?
            };
            let atom = match (name, nums.as_slice()) {
                ("siegel", [a, b, n]) if *n > 0 => Atom::Siegel { idx: FracIndex::new(*a, *b, *n as u64)? },
                ("fricke", [a, b, n]) if *n > 0 => Atom::Fricke { idx: FracIndex::new(*a, *b, *n as u64)? },
                ("fm", [p, m]) if *p > 2 && *m >= 1 && is_prime(*p as u64) => Atom::Fm {
                    p: *p as u64,
                    m: *m as u32,
                },
                ("j", []) => Atom::J,
                _ => return Err(bad("unknown factor")),
            };
            if exp != 0 {
                factors.push((atom, exp));
            }
        }
        if factors.is_empty() && coeff == 0 {
            return Err(bad("zero function"));
        }
        Ok(ModFnSpec { coeff, factors })
    }
}

impl fmt::Display for ModFnSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.coeff != 1 || self.factors.is_empty() {
            parts.push(self.coeff.to_string());
        }
        for (a, e) in &self.factors {
            if *e == 1 {
                parts.push(a.to_string());
            } else {
                parts.push(format!("{a}^{e}"));
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// Values at theta_K with caches for Siegel powers and Fricke values.
pub struct CmPoint {
    pub k: ImagQuad,
    pub prec: Prec,
    pub tau: TauPoint,
    eis: OnceLock<EisensteinData>,
    siegel: Mutex<HashMap<FracIndex, BigComplex>>,
    fricke: Mutex<HashMap<FracIndex, BigComplex>>,
}

impl CmPoint {
    pub fn new(k: &ImagQuad, prec: Prec) -> Self {
        CmPoint {
            k: *k,
            tau: k.theta_point(prec.digits.max(prec.tail_digits)),
            prec,
            eis: OnceLock::new(),
            siegel: Mutex::new(HashMap::new()),
            fricke: Mutex::new(HashMap::new()),
        }
    }

    pub fn digits(&self) -> u32 {
        self.prec.digits
    }

    fn eis(&self) -> Result<&EisensteinData> {
        if let Some(e) = self.eis.get() {
            return Ok(e);
        }
        let e = eisenstein(&self.tau, &self.prec)?;
        Ok(self.eis.get_or_init(|| e))
    }

    pub fn j(&self) -> Result<BigComplex> {
        Ok(self.eis()?.j.clone())
    }

    /// g_[r;s](theta)^{12N}; depends only on the class of idx mod Z^2.
    pub fn siegel12n(&self, idx: &FracIndex) -> Result<BigComplex> {
        let key = idx.canonical();
        if let Some(v) = self.siegel.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = siegel_g(&key, &self.tau, &self.prec)?.pow_u(12 * key.n);
        self.siegel.lock().unwrap().insert(key, v.clone());
        Ok(v)
    }

    /// f_[r;s](theta); even and periodic in the index.
    pub fn fricke(&self, idx: &FracIndex) -> Result<BigComplex> {
        let c = idx.canonical();
        let key = c.min(idx.neg().canonical());
        if let Some(v) = self.fricke.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = fricke_with(self.eis()?, &key, &self.tau, &self.prec)?;
        self.fricke.lock().unwrap().insert(key, v.clone());
        Ok(v)
    }

    /// f_m(theta)^gamma via the Fricke ratio with transformed indices.
    pub fn fm_conj(&self, p: u64, m: u32, g: &WMatrix) -> Result<BigComplex> {
        let pm = p.pow(m);
        let g = g.reduce(pm)?;
        let k = (pm / p) as i64;
        let f = |a: i64, b: i64| self.fricke(&act_on_index(&g, &FracIndex::new(a, b, pm)?)?);
        let top = f(0, 1)?;
        let fr = f(k, 0)?;
        let fs = f(0, k)?;
        let den = &fs - &fr;
        if den.abs_log10() < -f64::from(self.prec.digits) + 10.0 {
            return Err(CftError::DenominatorVanishes(format!("f_{m} conjugate at d_K = {}", self.k.d_k)));
        }
        let scale = Integer::from(p).pow(2 * (m + 1));
        Ok((&top - &fr).try_div(&den)?.scale_int(&scale))
    }

    /// f_m(theta) with the ratio and Siegel-product forms cross-checked.
    pub fn fm_checked(&self, p: u64, m: u32) -> Result<FmValue> {
        fm_func(p, m, &self.tau, &self.prec)
    }

    pub fn atom_conj(&self, a: &Atom, g: &WMatrix) -> Result<BigComplex> {
        match a {
            Atom::Siegel { idx } => self.siegel12n(&act_on_index(&g.reduce(idx.n)?, idx)?),
            Atom::Fricke { idx } => self.fricke(&act_on_index(&g.reduce(idx.n)?, idx)?),
            Atom::Fm { p, m } => self.fm_conj(*p, *m, g),
            Atom::J => self.j(),
        }
    }

    /// The value of spec^gamma at theta; gamma at a level divisible by the
    /// level of the spec.
    pub fn eval(&self, spec: &ModFnSpec, g: &WMatrix) -> Result<BigComplex> {
        let mut acc = BigComplex::from_int(1, self.digits()).scale_int(&spec.coeff);
        for (a, e) in &spec.factors {
            acc = &acc * &self.atom_conj(a, g)?.pow_i(*e)?;
        }
        Ok(acc.with_digits(self.digits()))
    }
}

/// Conjugates of spec(theta_K) under the given classes of W_{K,N}/+-I
/// (all classes when `subgroup` is None), in class order.
pub fn cm_conjugates(
    spec: &ModFnSpec,
    point: &CmPoint,
    n: u64,
    subgroup: Option<&[usize]>,
) -> Result<(WGroup, Vec<BigComplex>)> {
    if !n.is_multiple_of(spec.level()) {
        return Err(CftError::LevelMismatch {
            expected: n,
            found: spec.level(),
        });
    }
    let w = w_group(&point.k, n);
    let classes: Vec<usize> = match subgroup {
        Some(s) => s.to_vec(),
        None => (0..w.quotient_order()).collect(),
    };
    let vals = classes
        .par_iter()
        .map(|&i| point.eval(spec, &w.reps[i]))
        .collect::<Result<Vec<_>>>()?;
    Ok((w, vals))
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugatesReport {
    pub d_k: i64,
    pub level: u64,
    pub function: String,
    pub digits: u32,
    pub classes: Vec<(u64, u64)>,
    pub values: Vec<BigComplex>,
}

pub fn conjugates_report(spec: &ModFnSpec, k: &ImagQuad, n: u64, prec: Prec) -> Result<ConjugatesReport> {
    let point = CmPoint::new(k, prec);
    let (w, values) = cm_conjugates(spec, &point, n, None)?;
    Ok(ConjugatesReport {
        d_k: k.d_k,
        level: n,
        function: spec.to_string(),
        digits: prec.digits,
        classes: w.reps.iter().map(|g| (g.u, g.v)).collect(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cm::imag_quad;

    #[test]
    fn spec_parsing() {
        let s = ModFnSpec::parse("3^36*siegel:0,1,3^-1").unwrap();
        assert_eq!(s.coeff, Integer::from(3).pow(36));
        assert_eq!(s.factors, vec![(Atom::Siegel { idx: FracIndex::new(0, 1, 3).unwrap() }, -1)]);
        assert_eq!(s.level(), 3);
        assert_eq!(ModFnSpec::parse(&s.to_string()).unwrap(), s);
        assert_eq!(ModFnSpec::parse("j").unwrap().level(), 1);
        assert_eq!(ModFnSpec::parse("fm:3,2*fricke:1,0,3").unwrap().level(), 9);
        assert!(ModFnSpec::parse("fm:4,2").is_err());
        assert!(ModFnSpec::parse("siegel:3,3,3").is_err());
        assert!(ModFnSpec::parse("eta").is_err());
    }

    #[test]
    fn conjugates_of_siegel_power() {
        let k = imag_quad(-7).unwrap();
        let point = CmPoint::new(&k, Prec::new(40).unwrap());
        let spec = ModFnSpec::siegel12n(FracIndex::new(0, 1, 3).unwrap());
        let (_, v) = cm_conjugates(&spec, &point, 3, None).unwrap();
        assert_eq!(v.len(), 4);
        let (_, id) = cm_conjugates(&spec, &point, 3, Some(&[0])).unwrap();
        assert_eq!(id.len(), 1);
        assert_eq!(id[0], v[0]);
        // -I gives the same value
        let g = WMatrix::identity(&k, 3).neg();
        assert!((&point.eval(&spec, &g).unwrap() - &v[0]).abs_log10() < -30.0);
    }

    #[test]
    fn fm_conj_identity_matches_direct() {
        let k = imag_quad(-7).unwrap();
        let point = CmPoint::new(&k, Prec::new(50).unwrap());
        let id = WMatrix::identity(&k, 9);
        let a = point.fm_conj(3, 2, &id).unwrap();
        let b = point.fm_checked(3, 2).unwrap();
        assert!((&a - &b.ratio).abs_log10() < -40.0);
    }
}
