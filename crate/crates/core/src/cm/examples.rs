//! Numeric reproductions of the ray class field constructions: traces of
//! f_m values, norm-compatible Siegel products, normal elements and
//! integrality of CM values.

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::Serialize;

use super::eval::{cm_conjugates, CmPoint, ModFnSpec};
use super::field::{act_on_index, w_group, ImagQuad};
use super::recognize::{coefficient_scale_log10, min_separation_log10, recognize_alg_int, round_to_integer, separation_log10, IntPoly};
use crate::abelian::{character_table, FiniteAbelian};
use crate::arith::{is_prime, lcm};
use crate::bigcomplex::{BigComplex, Prec};
use crate::coprime::coprime_seq;
use crate::error::{CftError, Result};
use crate::modfunc::FracIndex;

/// Largest ray class group (modulo +-I) the numeric examples will enumerate.
pub const MAX_CM_DEGREE: usize = 20_000;
/// Precision ceiling for adaptive reruns.
pub const MAX_ADAPTIVE_DIGITS: u32 = 20_000;

fn check_size(k: &ImagQuad, n: u64) -> Result<usize> {
    let d = super::field::ray_degree(k, n)?;
    if d > MAX_CM_DEGREE {
        return Err(CftError::InvalidArgument(format!("[K_({n}):K] = {d} is too large")));
    }
    Ok(d)
}

fn sep_ok(min_sep: f64, sep_digits: u32) -> bool {
    min_sep > -f64::from(sep_digits)
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceLevel {
    pub m: u32,
    /// |Gal(K_(p^n)/K_(p^m))|.
    pub trace_terms: usize,
    /// Conjugates of the trace over K_(p).
    pub conjugates: Vec<BigComplex>,
    pub min_separation_log10: f64,
    pub distinct: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FmTraceReport {
    pub d_k: i64,
    pub p: u64,
    pub n: u32,
    pub digits: u32,
    pub separation_digits: u32,
    /// M_1, ..., M_n.
    #[serde(serialize_with = "crate::report::ser_ints")]
    pub denominators: Vec<Integer>,
    pub alpha: BigComplex,
    /// log10 |ratio - Siegel product| for f_m(theta), m = 2..n.
    pub fm_agreement_log10: Vec<f64>,
    pub levels: Vec<TraceLevel>,
    pub passed: bool,
}

impl FmTraceReport {
    pub fn check(&self) -> Result<()> {
        match self.levels.iter().find(|l| !l.distinct) {
            None if self.passed => Ok(()),
            Some(l) => Err(CftError::SeparationTooTight {
                min_sep_log10: l.min_separation_log10,
                tol_digits: self.separation_digits,
            }),
            None => Err(CftError::VerificationFailed("f_m formulas disagree".into())),
        }
    }
}

/// M_1 = 1, M_m = 1 + p prod_{k<m} M_k.
pub fn fm_trace_denominators(p: u64, n: u32) -> Vec<Integer> {
    let mut out = vec![Integer::from(1)];
    let mut prod = Integer::from(1);
    for _ in 2..=n {
        let m = Integer::from(&prod * p) + 1u32;
        prod *= &m;
        out.push(m);
    }
    out
}

/// Checks that Tr_{K_(p^n)/K_(p^m)}(alpha) generates K_(p^m) over K_(p)
/// for each m in `ms` (all of 2..=n when empty).
pub fn verify_fm_traces(k: &ImagQuad, p: u64, n: u32, ms: &[u32], prec: Prec, sep_digits: u32) -> Result<FmTraceReport> {
    if p < 3 || !is_prime(p) {
        return Err(CftError::InvalidArgument(format!("p = {p} is not an odd prime")));
    }
    if n < 2 {
        return Err(CftError::InvalidArgument("n must be at least 2".into()));
    }
    let ms: Vec<u32> = if ms.is_empty() { (2..=n).collect() } else { ms.to_vec() };
    if ms.iter().any(|&m| m < 2 || m > n) {
        return Err(CftError::InvalidArgument(format!("m must lie in 2..={n}")));
    }
    let pn = p.checked_pow(n).ok_or_else(|| CftError::InvalidArgument("p^n overflows".into()))?;
    check_size(k, pn)?;
    let point = CmPoint::new(k, prec);
    let denominators = fm_trace_denominators(p, n);
    let fm_agreement_log10 = (2..=n)
        .map(|m| Ok(point.fm_checked(p, m)?.agreement_log10))
        .collect::<Result<Vec<_>>>()?;
    let w = w_group(k, pn);
    let alpha_conj: Vec<BigComplex> = w
        .reps
        .par_iter()
        .map(|g| {
            let mut acc = BigComplex::zero(prec.digits);
            for m in 2..=n {
                let f = point.fm_conj(p, m, g)?;
                acc = &acc + &f.scale_rat(&Rational::from((1, denominators[m as usize - 1].clone())));
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let over_kp = w.kernel_mod(p);
    let mut levels = Vec::new();
    for &m in &ms {
        let h = w.kernel_mod(p.pow(m));
        let conjugates: Vec<BigComplex> = w
            .cosets(&h)
            .into_iter()
            .filter(|c| over_kp.contains(&c[0]))
            .map(|c| c.iter().fold(BigComplex::zero(prec.digits), |a, &i| &a + &alpha_conj[i]))
            .collect();
        let expect = (p * p).pow(m - 1) as usize;
        if conjugates.len() != expect {
            return Err(CftError::VerificationFailed(format!(
                "found {} conjugates over K_({p}), expected {expect}",
                conjugates.len()
            )));
        }
        let min_sep = min_separation_log10(&conjugates);
        levels.push(TraceLevel {
            m,
            trace_terms: h.len(),
            conjugates,
            min_separation_log10: min_sep,
            distinct: sep_ok(min_sep, sep_digits),
        });
    }
    let fm_ok = fm_agreement_log10.iter().all(|&a| a < -f64::from(prec.digits) + 12.0);
    let passed = fm_ok && levels.iter().all(|l| l.distinct);
    Ok(FmTraceReport {
        d_k: k.d_k,
        p,
        n,
        digits: prec.digits,
        separation_digits: sep_digits,
        denominators,
        alpha: alpha_conj[0].clone(),
        fm_agreement_log10,
        levels,
        passed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NormCheckCm {
    pub n: i64,
    pub min_separation_log10: f64,
    pub distinct: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RamaLevel {
    pub k: usize,
    pub level: u64,
    /// [K_(N_k) : K], the number of conjugates of the norm.
    pub degree: usize,
    pub norm: BigComplex,
    pub checks: Vec<NormCheckCm>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RamaReport {
    pub d_k: i64,
    pub levels_n: Vec<u64>,
    pub n_set: Vec<i64>,
    pub digits: u32,
    pub separation_digits: u32,
    /// [K_(N_s) : K_(N_{s-1})] with N_0 = 1.
    pub step_degrees: Vec<usize>,
    pub beta: BigComplex,
    pub levels: Vec<RamaLevel>,
    pub passed: bool,
}

impl RamaReport {
    pub fn check(&self) -> Result<()> {
        if self.passed {
            return Ok(());
        }
        let worst = self
            .levels
            .iter()
            .flat_map(|l| l.checks.iter())
            .map(|c| c.min_separation_log10)
            .fold(f64::INFINITY, f64::min);
        Err(CftError::SeparationTooTight {
            min_sep_log10: worst,
            tol_digits: self.separation_digits,
        })
    }
}

/// The norm-compatible product of Siegel powers along K_(N_1) <= ... <= K_(N_t).
pub fn rama_beta(k: &ImagQuad, n_list: &[u64], n_set: &[i64], prec: Prec, sep_digits: u32) -> Result<RamaReport> {
    if n_list.is_empty() {
        return Err(CftError::EmptyInput);
    }
    if n_list[0] < 2 || n_list.windows(2).any(|w| w[1] % w[0] != 0) {
        return Err(CftError::InvalidTower(format!("levels {n_list:?} must satisfy 2 <= N_1 | N_2 | ...")));
    }
    if n_set.contains(&0) {
        return Err(CftError::InvalidArgument("exponents must be nonzero".into()));
    }
    let top = *n_list.last().unwrap();
    check_size(k, top)?;
    let point = CmPoint::new(k, prec);
    let groups: Vec<_> = n_list.iter().map(|&n| w_group(k, n)).collect();
    // g_[0;1/N_s]^{12 N_s} under each class of W_{N_s}
    let tables: Vec<Vec<BigComplex>> = groups
        .iter()
        .map(|ws| {
            let idx = FracIndex::new(0, 1, ws.n)?;
            ws.reps
                .par_iter()
                .map(|g| point.siegel12n(&act_on_index(g, &idx)?))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut step_degrees = vec![groups[0].quotient_order()];
    for s in 1..groups.len() {
        step_degrees.push(groups[s].quotient_order() / groups[s - 1].quotient_order());
    }
    let w = w_group(k, top);
    let beta_conj: Vec<BigComplex> = w
        .reps
        .par_iter()
        .map(|g| {
            let cls = |s: usize| groups[s].class(&g.reduce(groups[s].n).expect("divides"));
            let mut b = tables[0][cls(0)].clone();
            for s in 1..groups.len() {
                let ws = &groups[s];
                let c = cls(s);
                let mut den = BigComplex::one(prec.digits);
                for h in ws.kernel_mod(groups[s - 1].n) {
                    den = &den * &tables[s][ws.mul_class(h, c)];
                }
                b = &b * &tables[s][c].pow_u(step_degrees[s] as u64).try_div(&den)?;
            }
            Ok(b)
        })
        .collect::<Result<_>>()?;
    let mut levels = Vec::new();
    for (ki, &nk) in n_list.iter().enumerate() {
        let h = w.kernel_mod(nk);
        let norms: Vec<BigComplex> = w
            .cosets(&h)
            .into_iter()
            .map(|c| c.iter().fold(BigComplex::one(prec.digits), |a, &i| &a * &beta_conj[i]))
            .collect();
        let checks = n_set
            .iter()
            .map(|&e| {
                let vals = norms.iter().map(|x| x.pow_i(e)).collect::<Result<Vec<_>>>()?;
                let min_sep = min_separation_log10(&vals);
                Ok(NormCheckCm {
                    n: e,
                    min_separation_log10: min_sep,
                    distinct: sep_ok(min_sep, sep_digits),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        levels.push(RamaLevel {
            k: ki + 1,
            level: nk,
            degree: norms.len(),
            norm: norms[0].clone(),
            checks,
        });
    }
    let passed = levels.iter().all(|l| l.checks.iter().all(|c| c.distinct));
    Ok(RamaReport {
        d_k: k.d_k,
        levels_n: n_list.to_vec(),
        n_set: n_set.to_vec(),
        digits: prec.digits,
        separation_digits: sep_digits,
        step_degrees,
        beta: beta_conj[0].clone(),
        levels,
        passed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterCheck {
    pub chi: usize,
    /// log10 of |sum_k chi(g_k^-1) beta^{g_k}| relative to its largest term.
    pub relative_log10: f64,
    pub nonzero: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalCmReport {
    pub d_k: i64,
    pub level: u64,
    pub degree: usize,
    pub digits: u32,
    pub separation_digits: u32,
    pub recognition_digits: u32,
    pub alpha: BigComplex,
    /// N(chi_i, m) in row-major order (m outer, chi inner).
    #[serde(serialize_with = "crate::report::ser_ints")]
    pub norms: Vec<Integer>,
    pub worst_recognition_log10: f64,
    pub denominator_digits: Vec<usize>,
    /// Omitted (empty) when any denominator exceeds `MAX_REPORTED_DIGITS`.
    #[serde(serialize_with = "crate::report::ser_ints")]
    pub denominators: Vec<Integer>,
    pub beta: BigComplex,
    pub characters: Vec<CharacterCheck>,
    pub passed: bool,
}

/// Denominators larger than this are summarized by digit count only.
pub const MAX_REPORTED_DIGITS: usize = 2000;
/// Refuse constructions whose denominators would exceed this many digits.
pub const MAX_DENOMINATOR_DIGITS: f64 = 2.0e6;

impl NormalCmReport {
    pub fn check(&self) -> Result<()> {
        if self.passed {
            return Ok(());
        }
        let worst = self
            .characters
            .iter()
            .map(|c| c.relative_log10)
            .fold(f64::INFINITY, f64::min);
        Err(CftError::SeparationTooTight {
            min_sep_log10: worst,
            tol_digits: self.separation_digits,
        })
    }
}

struct CharSums {
    alpha: Vec<BigComplex>,
    /// S(chi, m) at the identity, row-major.
    sums: Vec<BigComplex>,
    norms: Vec<BigComplex>,
}

fn normal_sums(k: &ImagQuad, n: u64, prec: Prec) -> Result<CharSums> {
    let point = CmPoint::new(k, prec);
    let wn = w_group(k, n);
    let d = wn.quotient_order();
    let idx = FracIndex::new(0, 1, n)?;
    let alpha: Vec<BigComplex> = wn
        .reps
        .par_iter()
        .map(|g| point.siegel12n(&act_on_index(g, &idx)?))
        .collect::<Result<_>>()?;
    let group = FiniteAbelian::from_op(d, |i, j| wn.mul_class(i, j));
    let table = character_table(&group);
    let e = table.exponent;
    let digits = prec.digits;
    let root = |t: u64| {
        let ang = BigComplex::pi(digits) * Rational::from((2 * (t % e) as i64, e as i64));
        BigComplex::expi(&ang, digits)
    };
    // Gal(K_(N)(zeta_d)/K): classes of W_L keyed by (class mod N, det mod d)
    let l = lcm(n, d as u64);
    let wl = w_group(k, l);
    let mut keys = std::collections::BTreeMap::new();
    for g in &wl.reps {
        let key = (wn.class(&g.reduce(n)?), g.det() % d as u64);
        keys.entry(key).or_insert(*g);
    }
    let conj: Vec<(usize, u64)> = keys.keys().copied().collect();
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|m| (0..d).map(move |c| (m, c))).collect();
    let results: Vec<(BigComplex, BigComplex)> = pairs
        .par_iter()
        .map(|&(m, chi)| {
            let s_at = |cls: usize, det: u64| {
                let mut acc = BigComplex::zero(digits);
                for g in 0..d {
                    let v = (e - table.values[chi][g] % e) % e;
                    let a = alpha[wn.mul_class(g, cls)].pow_u(m as u64);
                    acc = &acc + &(&root(v * det) * &a);
                }
                acc
            };
            let s = s_at(0, 1);
            let mut prod = BigComplex::one(digits);
            for &(cls, det) in &conj {
                prod = &prod * &s_at(cls, det);
            }
            let norm = BigComplex::from_real(prod.abs(), digits).square();
            (s, norm)
        })
        .collect();
    let (sums, norms) = results.into_iter().unzip();
    Ok(CharSums { alpha, sums, norms })
}

/// The normal element of K_(N)/K built from alpha = g_[0;1/N](theta)^{12N}.
pub fn normal_element_cm(
    k: &ImagQuad,
    n: u64,
    prec: Prec,
    sep_digits: u32,
    recognition_digits: u32,
    max_degree: usize,
) -> Result<NormalCmReport> {
    if n < 2 {
        return Err(CftError::InvalidArgument("level must be at least 2".into()));
    }
    let d = check_size(k, n)?;
    if d > max_degree {
        return Err(CftError::InvalidArgument(format!(
            "[K_({n}):K] = {d} exceeds the degree limit {max_degree}"
        )));
    }
    let mut prec = prec;
    let sums = loop {
        let s = normal_sums(k, n, prec)?;
        let need = s.norms.iter().map(BigComplex::abs_log10).fold(0.0, f64::max)
            + f64::from(recognition_digits)
            + 20.0;
        if need <= f64::from(prec.digits) {
            break s;
        }
        let digits = need.ceil() as u32;
        if digits > MAX_ADAPTIVE_DIGITS {
            return Err(CftError::PrecisionUnreachable(format!("norms need {digits} digits")));
        }
        prec = Prec::new(digits)?;
    };
    let mut norms = Vec::with_capacity(sums.norms.len());
    let mut worst = f64::NEG_INFINITY;
    for v in &sums.norms {
        let (z, r) = round_to_integer(v);
        worst = worst.max(r);
        norms.push(z.abs());
    }
    if worst >= -f64::from(recognition_digits) {
        return Err(CftError::RecognitionFailed {
            residual_log10: worst,
            tol_digits: recognition_digits,
        });
    }
    // predicted size of the coprime sequence
    let mut total = 0.0f64;
    for v in &norms {
        let lm = if *v == 0 { 0.0 } else { (v.significant_bits() as f64) * std::f64::consts::LOG10_2 + total };
        if lm > MAX_DENOMINATOR_DIGITS {
            return Err(CftError::InvalidArgument(format!(
                "denominators would exceed {MAX_DENOMINATOR_DIGITS} digits"
            )));
        }
        total += lm;
    }
    let seq = coprime_seq(&norms)?;
    let coeffs: Vec<Rational> = (0..d)
        .map(|m| {
            seq.outputs[m * d..(m + 1) * d]
                .iter()
                .fold(Rational::new(), |a, mi| a + Rational::from((1, mi.clone())))
        })
        .collect();
    let digits = prec.digits;
    let cf: Vec<BigComplex> = coeffs
        .iter()
        .map(|c| BigComplex::from_rational(c, &Rational::new(), digits))
        .collect();
    let beta_at = |a: &BigComplex| {
        let mut acc = BigComplex::zero(digits);
        let mut pw = BigComplex::one(digits);
        for c in &cf {
            acc = &acc + &(c * &pw);
            pw = &pw * a;
        }
        acc
    };
    // sum_k chi(g_k^-1) beta^{g_k} = sum_m c_m S(chi, m), with S = 0 where N = 0
    let characters: Vec<CharacterCheck> = (0..d)
        .map(|chi| {
            let terms: Vec<BigComplex> = (0..d)
                .filter(|&m| norms[m * d + chi] != 0)
                .map(|m| &cf[m] * &sums.sums[m * d + chi])
                .collect();
            let total = terms.iter().fold(BigComplex::zero(digits), |a, t| &a + t);
            let scale = terms.iter().map(BigComplex::abs_log10).fold(f64::NEG_INFINITY, f64::max);
            let rel = total.abs_log10() - scale;
            CharacterCheck {
                chi: chi + 1,
                relative_log10: rel,
                nonzero: !terms.is_empty() && sep_ok(rel, sep_digits),
            }
        })
        .collect();
    let denominator_digits: Vec<usize> = seq.outputs.iter().map(|m| m.to_string().len()).collect();
    let denominators = if denominator_digits.iter().all(|&x| x <= MAX_REPORTED_DIGITS) {
        seq.outputs.clone()
    } else {
        Vec::new()
    };
    let passed = characters.iter().all(|c| c.nonzero);
    Ok(NormalCmReport {
        d_k: k.d_k,
        level: n,
        degree: d,
        digits,
        separation_digits: sep_digits,
        recognition_digits,
        alpha: sums.alpha[0].clone(),
        norms,
        worst_recognition_log10: worst,
        denominator_digits,
        denominators,
        beta: beta_at(&sums.alpha[0]),
        characters,
        passed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbePoint {
    pub d_k: i64,
    pub orbit_size: usize,
    pub closed_under_conjugation: bool,
    pub digits: u32,
    pub polynomial: Option<IntPoly>,
    pub integral: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub function: String,
    pub level: u64,
    pub tol_digits: u32,
    pub points: Vec<ProbePoint>,
    pub all_integral: bool,
}

fn probe_one(spec: &ModFnSpec, k: &ImagQuad, prec: Prec, tol_digits: u32) -> Result<ProbePoint> {
    let level = spec.level();
    let mut prec = prec;
    loop {
        let point = CmPoint::new(k, prec);
        let (_, mut orbit) = cm_conjugates(spec, &point, level, None)?;
        let orbit_size = orbit.len();
        let half = -f64::from(prec.digits / 2);
        let closed = orbit
            .iter()
            .all(|x| orbit.iter().any(|y| separation_log10(&x.conj(), y) < half || (x.conj().is_zero() && y.is_zero())));
        if !closed {
            let extra: Vec<BigComplex> = orbit.iter().map(BigComplex::conj).collect();
            orbit.extend(extra);
        }
        let scale = coefficient_scale_log10(&orbit);
        let need = scale + f64::from(tol_digits) + 20.0;
        if need > f64::from(prec.digits) && (need.ceil() as u32) <= MAX_ADAPTIVE_DIGITS {
            prec = Prec::new(need.ceil() as u32)?;
            continue;
        }
        let (polynomial, error) = match recognize_alg_int(&orbit, tol_digits) {
            Ok(p) => (Some(p), None),
            Err(e) => (None, Some(e.to_string())),
        };
        return Ok(ProbePoint {
            d_k: k.d_k,
            orbit_size,
            closed_under_conjugation: closed,
            digits: prec.digits,
            integral: polynomial.is_some(),
            polynomial,
            error,
        });
    }
}

/// Recognizes the full conjugate orbit of spec(theta_K) for each field.
pub fn integrality_probe(spec: &ModFnSpec, ks: &[ImagQuad], prec: Prec, tol_digits: u32) -> Result<ProbeReport> {
    let level = spec.level();
    if level > 1 {
        for k in ks {
            check_size(k, level)?;
        }
    }
    let points = ks
        .iter()
        .map(|k| match probe_one(spec, k, prec, tol_digits) {
            Ok(p) => p,
            Err(e) => ProbePoint {
                d_k: k.d_k,
                orbit_size: 0,
                closed_under_conjugation: false,
                digits: prec.digits,
                polynomial: None,
                integral: false,
                error: Some(e.to_string()),
            },
        })
        .collect::<Vec<_>>();
    let all_integral = points.iter().all(|p| p.integral);
    Ok(ProbeReport {
        function: spec.to_string(),
        level,
        tol_digits,
        points,
        all_integral,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cm::{imag_quad, SUPPORTED_DK};

    fn p(d: u32) -> Prec {
        Prec::new(d).unwrap()
    }

    #[test]
    fn fm_trace_denominator_recursion() {
        let m = fm_trace_denominators(3, 4);
        assert_eq!(m, vec![Integer::from(1), Integer::from(4), Integer::from(13), Integer::from(157)]);
    }

    #[test]
    fn fm_trace_small() {
        let k = imag_quad(-7).unwrap();
        let r = verify_fm_traces(&k, 3, 2, &[], p(64), 32).unwrap();
        assert_eq!(r.denominators[1], 4);
        assert_eq!(r.levels[0].conjugates.len(), 9);
        assert_eq!(r.levels[0].trace_terms, 1);
        r.check().unwrap();
        assert!(verify_fm_traces(&k, 2, 2, &[], p(64), 32).is_err());
    }

    #[test]
    fn rama_small() {
        let k = imag_quad(-7).unwrap();
        let r = rama_beta(&k, &[3, 9], &[1, 2], p(64), 32).unwrap();
        assert_eq!(r.step_degrees, vec![4, 9]);
        assert_eq!(r.levels[0].degree, 4);
        assert_eq!(r.levels[1].degree, 36);
        r.check().unwrap();
        let single = rama_beta(&k, &[3], &[1], p(64), 32).unwrap();
        assert!(single.passed);
        assert!(rama_beta(&k, &[3, 4], &[1], p(64), 32).is_err());
    }

    #[test]
    fn normal_small() {
        let k = imag_quad(-7).unwrap();
        let r = normal_element_cm(&k, 3, p(64), 32, 20, 12).unwrap();
        assert_eq!(r.degree, 4);
        r.check().unwrap();
        let k8 = imag_quad(-8).unwrap();
        normal_element_cm(&k8, 3, p(64), 32, 20, 12).unwrap().check().unwrap();
        let r2 = normal_element_cm(&k, 2, p(64), 32, 20, 12).unwrap();
        assert_eq!(r2.degree, 1);
        assert!(r2.passed);
    }

    #[test]
    fn probe_siegel_and_j() {
        let ks: Vec<ImagQuad> = [-7, -8, -11].iter().map(|&d| imag_quad(d).unwrap()).collect();
        let g = ModFnSpec::parse("siegel:0,1,3").unwrap();
        let r = integrality_probe(&g, &ks, p(64), 20).unwrap();
        assert!(r.all_integral, "{r:?}");
        assert_eq!(r.points[0].polynomial.as_ref().unwrap().degree(), 4);
        let inv = ModFnSpec::parse("3^36*siegel:0,1,3^-1").unwrap();
        assert!(integrality_probe(&inv, &ks, p(64), 20).unwrap().all_integral);
        let all: Vec<ImagQuad> = SUPPORTED_DK.iter().map(|&d| imag_quad(d).unwrap()).collect();
        let j = integrality_probe(&ModFnSpec::parse("j").unwrap(), &all, p(64), 20).unwrap();
        assert!(j.all_integral);
        let expect = [-3375i64, 8000, -32768, -884736, -884736000, -147197952000, -262537412640768000];
        for (pt, e) in j.points.iter().zip(expect) {
            assert_eq!(pt.polynomial.as_ref().unwrap().coeffs[0], -Integer::from(e));
        }
    }
}
