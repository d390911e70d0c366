//! Modular functions at arbitrary precision: eta, Siegel functions,
//! Eisenstein data (g2, g3, Delta, j), Weierstrass p, Fricke functions
//! and the f_m quotients used for ray class field generators.
//!
//! All series are q-expansions with q = e^{2 pi i tau}, truncated once the
//! next term drops below 10^-tail_digits.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::arith::{gcd, is_prime, lcm};
use crate::bigcomplex::{sqrt_two_pi, BigComplex, Prec};
use crate::error::{CftError, Result};

/// Hard cap on the number of series terms.
pub const MAX_TERMS: u64 = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EtaNorm {
    /// sqrt(2 pi) zeta_8 q^{1/24} prod (1 - q^n)
    Paper,
    /// q^{1/24} prod (1 - q^n)
    Classical,
}

impl EtaNorm {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(EtaNorm::Paper),
            "classical" => Ok(EtaNorm::Classical),
            _ => Err(CftError::InvalidArgument(format!("unknown eta normalization {s:?}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EtaNorm::Paper => "paper",
            EtaNorm::Classical => "classical",
        }
    }
}

/// A point of the upper half plane.
#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
pub struct TauPoint(BigComplex);

impl TauPoint {
    pub fn new(tau: BigComplex) -> Result<Self> {
        if !tau.is_finite() || !tau.im().is_sign_positive() || tau.im().is_zero() {
            return Err(CftError::InvalidArgument("tau must lie in the upper half plane".into()));
        }
        Ok(TauPoint(tau))
    }

    pub fn from_f64(re: f64, im: f64, digits: u32) -> Result<Self> {
        Self::new(BigComplex::from_f64(re, im, digits))
    }

    pub fn parse(s: &str, digits: u32) -> Result<Self> {
        Self::new(BigComplex::parse(s, digits)?)
    }

    pub fn value(&self) -> &BigComplex {
        &self.0
    }

    /// tau + k for an integer k.
    pub fn shift(&self, k: i64) -> Self {
        TauPoint(self.0.add_real_int(k))
    }

    fn at(&self, w: u32) -> BigComplex {
        self.0.with_digits(w)
    }

    /// log10 |q|.
    pub fn log10_q(&self) -> f64 {
        -2.0 * std::f64::consts::PI * self.0.im().to_f64() / std::f64::consts::LN_10
    }
}

/// [r; s] = [a/N; b/N]. The stored numerators are taken literally; use
/// `canonical` for the representative with 0 <= a, b < N.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FracIndex {
    pub a: i64,
    pub b: i64,
    pub n: u64,
}

impl FracIndex {
    pub fn new(a: i64, b: i64, n: u64) -> Result<Self> {
        if n < 2 {
            return Err(CftError::InvalidIndex(format!("level must be at least 2, got {n}")));
        }
        let ni = n as i64;
        if a.rem_euclid(ni) == 0 && b.rem_euclid(ni) == 0 {
            return Err(CftError::InvalidIndex(format!("[{a}/{n}; {b}/{n}] is integral")));
        }
        Ok(FracIndex { a, b, n })
    }

    /// Parses "a,b,N".
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || CftError::InvalidIndex(format!("expected a,b,N but got {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let a = parts[0].parse().map_err(|_| bad())?;
        let b = parts[1].parse().map_err(|_| bad())?;
        let n = parts[2].parse().map_err(|_| bad())?;
        Self::new(a, b, n)
    }

    pub fn canonical(&self) -> Self {
        let ni = self.n as i64;
        FracIndex {
            a: self.a.rem_euclid(ni),
            b: self.b.rem_euclid(ni),
            n: self.n,
        }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }

    pub fn r(&self) -> Rational {
        Rational::from((self.a, self.n))
    }

    pub fn s(&self) -> Rational {
        Rational::from((self.b, self.n))
    }

    pub fn neg(&self) -> Self {
        FracIndex {
            a: -self.a,
            b: -self.b,
            n: self.n,
        }
    }

    /// The same class written at level m (a multiple of n).
    pub fn at_level(&self, m: u64) -> Result<Self> {
        if !m.is_multiple_of(self.n) {
            return Err(CftError::LevelMismatch {
                expected: m,
                found: self.n,
            });
        }
        let k = (m / self.n) as i64;
        Ok(FracIndex {
            a: self.a * k,
            b: self.b * k,
            n: m,
        })
    }

    /// Literal sum and difference at the common level.
    pub fn sum_diff(&self, other: &Self) -> Result<(Self, Self)> {
        let l = lcm(self.n, other.n);
        let (x, y) = (self.at_level(l)?, other.at_level(l)?);
        Ok((
            FracIndex::new(x.a + y.a, x.b + y.b, l)?,
            FracIndex::new(x.a - y.a, x.b - y.b, l)?,
        ))
    }

    /// Congruence modulo Z^2.
    pub fn equiv(&self, other: &Self) -> bool {
        let l = lcm(self.n, other.n);
        match (self.at_level(l), other.at_level(l)) {
            (Ok(x), Ok(y)) => x.canonical() == y.canonical(),
            _ => false,
        }
    }

    pub fn equiv_pm(&self, other: &Self) -> bool {
        self.equiv(other) || self.equiv(&other.neg())
    }

    /// The level actually needed (denominator of the reduced fractions).
    pub fn reduced_level(&self) -> u64 {
        let g = gcd(gcd(self.a.unsigned_abs(), self.b.unsigned_abs()), self.n);
        self.n / g
    }
}

impl std::fmt::Display for FracIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}/{}; {}/{}]", self.a, self.n, self.b, self.n)
    }
}

/// Number of q-series terms n with n*log10|q| + offset < eps.
fn term_count(tau: &TauPoint, offset: f64, prec: &Prec) -> Result<u64> {
    let lq = tau.log10_q();
    let need = (prec.eps_log10() - offset) / lq;
    let n = need.max(0.0).ceil() as u64 + 2;
    if !need.is_finite() || n > MAX_TERMS {
        return Err(CftError::PrecisionUnreachable(format!(
            "|q| = 10^{lq:.3e} needs more than {MAX_TERMS} terms"
        )));
    }
    Ok(n)
}

fn finish(z: BigComplex, prec: &Prec, what: &str) -> Result<BigComplex> {
    if !z.is_finite() {
        return Err(CftError::PrecisionUnreachable(format!("{what} overflowed")));
    }
    Ok(z.with_digits(prec.digits))
}

fn work_digits(prec: &Prec) -> u32 {
    prec.digits.max(prec.tail_digits)
}

fn q_of(tau: &TauPoint, w: u32) -> BigComplex {
    BigComplex::exp_2pi_i(&tau.at(w))
}

/// e^{2 pi i x tau} for rational x.
fn q_pow(tau: &TauPoint, x: &Rational, w: u32) -> BigComplex {
    BigComplex::exp_2pi_i(&tau.at(w).scale_rat(x))
}

/// prod_{n>=1} (1 - q^n).
fn euler_product(tau: &TauPoint, prec: &Prec) -> Result<BigComplex> {
    let w = work_digits(prec);
    let terms = term_count(tau, 0.0, prec)?;
    let q = q_of(tau, w);
    let mut qn = q.clone();
    let mut acc = BigComplex::one(w);
    for _ in 0..terms {
        acc = &acc - &(&acc * &qn);
        qn = &qn * &q;
    }
    Ok(acc)
}

pub fn eta(tau: &TauPoint, norm: EtaNorm, prec: &Prec) -> Result<BigComplex> {
    let w = work_digits(prec);
    let mut v = &q_pow(tau, &Rational::from((1, 24)), w) * &euler_product(tau, prec)?;
    if norm == EtaNorm::Paper {
        let zeta8 = BigComplex::expi(&(BigComplex::pi(w) / 4u32), w);
        v = (&v * &zeta8).scale(&sqrt_two_pi(w));
    }
    finish(v, prec, "eta")
}

/// e^{2 pi i (r tau + s)} for the literal index.
fn w_of(idx: &FracIndex, tau: &TauPoint, wd: u32) -> BigComplex {
    let z = &tau.at(wd).scale_rat(&idx.r()) + &BigComplex::from_rational(&idx.s(), &Rational::new(), wd);
    BigComplex::exp_2pi_i(&z)
}

/// The Siegel function, evaluated from the literal numerators of idx.
pub fn siegel_g(idx: &FracIndex, tau: &TauPoint, prec: &Prec) -> Result<BigComplex> {
    let w = work_digits(prec);
    let (r, s) = (idx.r(), idx.s());
    let big_w = w_of(idx, tau, w);
    let w_inv = big_w.inv()?;
    let lw = big_w.abs_log10().abs();
    let terms = term_count(tau, lw, prec)?;
    let q = q_of(tau, w);
    let mut acc = BigComplex::one(w) - &big_w;
    let mut qn = q.clone();
    for _ in 0..terms {
        let f1 = BigComplex::one(w) - &(&qn * &big_w);
        let f2 = BigComplex::one(w) - &(&qn * &w_inv);
        acc = &acc * &(&f1 * &f2);
        qn = &qn * &q;
    }
    // -q^{(r^2 - r + 1/6)/2} e^{pi i s (r - 1)}
    let e1 = (Rational::from(&r * &r) - &r + Rational::from((1, 6))) / 2u32;
    let pre_q = q_pow(tau, &e1, w);
    let phase = Float::with_val(prec.bits(), BigComplex::pi(w) * (&s * Rational::from(&r - 1u32)));
    let pre = &pre_q * &BigComplex::expi(&phase, w);
    let v = -(&pre * &acc);
    if v.is_zero() {
        return Err(CftError::VerificationFailed(format!("Siegel function vanished at {idx}")));
    }
    finish(v, prec, "Siegel function")
}

#[derive(Clone, Debug, Serialize)]
pub struct EisensteinData {
    pub e4: BigComplex,
    pub e6: BigComplex,
    pub g2: BigComplex,
    pub g3: BigComplex,
    pub delta: BigComplex,
    pub j: BigComplex,
}

pub fn eisenstein(tau: &TauPoint, prec: &Prec) -> Result<EisensteinData> {
    let w = work_digits(prec);
    let q = q_of(tau, w);
    let lq = tau.log10_q();
    let mut s3 = BigComplex::zero(w);
    let mut s5 = BigComplex::zero(w);
    let mut qn = q.clone();
    let mut n: u64 = 1;
    loop {
        let nf = n as f64;
        if 3.0 + 5.0 * nf.log10() + nf * lq < prec.eps_log10() {
            break;
        }
        if n > MAX_TERMS {
            return Err(CftError::PrecisionUnreachable("Eisenstein series".into()));
        }
        let lam = qn.try_div(&(BigComplex::one(w) - &qn))?;
        let n3 = Integer::from(n).pow(3);
        let n5 = Integer::from(n).pow(5);
        s3 = &s3 + &lam.scale_int(&n3);
        s5 = &s5 + &lam.scale_int(&n5);
        qn = &qn * &q;
        n += 1;
    }
    let e4 = s3.scale_int(&Integer::from(240)).add_real_int(1);
    let e6 = (-&s5.scale_int(&Integer::from(504))).add_real_int(1);
    let pi = BigComplex::pi(w);
    let pi4 = Float::with_val(prec.bits(), pi.clone().square().square());
    let pi6 = Float::with_val(prec.bits(), &pi4 * pi.square());
    let g2 = e4.scale(&(pi4 * Rational::from((4, 3))));
    let g3 = e6.scale(&(pi6 * Rational::from((8, 27))));
    let g2c = &g2.square() * &g2;
    let delta = &g2c - &g3.square().scale_int(&Integer::from(27));
    if delta.is_zero() {
        return Err(CftError::VerificationFailed("Delta vanished".into()));
    }
    let j = g2c.scale_int(&Integer::from(1728)).try_div(&delta)?;
    Ok(EisensteinData {
        e4: finish(e4, prec, "E4")?,
        e6: finish(e6, prec, "E6")?,
        g2: finish(g2, prec, "g2")?,
        g3: finish(g3, prec, "g3")?,
        delta: finish(delta, prec, "Delta")?,
        j: finish(j, prec, "j")?,
    })
}

pub fn j_invariant(tau: &TauPoint, prec: &Prec) -> Result<BigComplex> {
    Ok(eisenstein(tau, prec)?.j)
}

/// p(r tau + s; [tau, 1]).
pub fn wp_value(idx: &FracIndex, tau: &TauPoint, prec: &Prec) -> Result<BigComplex> {
    let w = work_digits(prec);
    let big_w = w_of(idx, tau, w);
    let one = BigComplex::one(w);
    if (&one - &big_w).abs_log10() < -f64::from(w) {
        return Err(CftError::LatticePoint);
    }
    let w_inv = big_w.inv()?;
    let lw = big_w.abs_log10().abs();
    let terms = term_count(tau, lw + 2.0, prec)?;
    let q = q_of(tau, w);
    let frac = |x: &BigComplex| -> Result<BigComplex> { x.try_div(&(&one - x).square()) };
    let mut acc = &BigComplex::from_rational(&Rational::from((1, 12)), &Rational::new(), w) + &frac(&big_w)?;
    let mut qn = q.clone();
    for _ in 0..terms {
        let t1 = frac(&(&qn * &big_w))?;
        let t2 = frac(&(&qn * &w_inv))?;
        let t3 = frac(&qn)?.scale_int(&Integer::from(2));
        acc = &(&acc + &t1) + &(&t2 - &t3);
        qn = &qn * &q;
    }
    // (2 pi i)^2 = -4 pi^2
    let four_pi2 = Float::with_val(prec.bits(), BigComplex::pi(w).square()) * 4u32;
    finish(-acc.scale(&four_pi2), prec, "Weierstrass p")
}

/// g2 g3 / Delta * p_[r;s].
pub fn fricke_f(idx: &FracIndex, tau: &TauPoint, prec: &Prec) -> Result<BigComplex> {
    let e = eisenstein(tau, prec)?;
    fricke_with(&e, idx, tau, prec)
}

/// Fricke value reusing precomputed Eisenstein data at the same tau.
pub fn fricke_with(e: &EisensteinData, idx: &FracIndex, tau: &TauPoint, prec: &Prec) -> Result<BigComplex> {
    let wp = wp_value(idx, tau, prec)?;
    let c = (&e.g2 * &e.g3).try_div(&e.delta)?;
    finish(&c * &wp, prec, "Fricke function")
}

fn check_odd_prime(p: u64, m: u32) -> Result<u64> {
    if p < 3 || !is_prime(p) {
        return Err(CftError::InvalidArgument(format!("p = {p} is not an odd prime")));
    }
    if m == 0 {
        return Err(CftError::InvalidArgument("m must be at least 1".into()));
    }
    p.checked_pow(m)
        .filter(|&q| q <= i64::MAX as u64)
        .ok_or_else(|| CftError::InvalidArgument(format!("{p}^{m} is too large")))
}

/// p^{2(m+1)} (f_[0;1/p^m] - f_[1/p;0]) / (f_[0;1/p] - f_[1/p;0]).
pub fn fm_ratio(p: u64, m: u32, tau: &TauPoint, prec: &Prec) -> Result<BigComplex> {
    let pm = check_odd_prime(p, m)?;
    let e = eisenstein(tau, prec)?;
    let f_top = fricke_with(&e, &FracIndex::new(0, 1, pm)?, tau, prec)?;
    let f_r = fricke_with(&e, &FracIndex::new(1, 0, p)?, tau, prec)?;
    let f_s = fricke_with(&e, &FracIndex::new(0, 1, p)?, tau, prec)?;
    let den = &f_s - &f_r;
    if den.abs_log10() < -f64::from(prec.digits) + 10.0 {
        return Err(CftError::DenominatorVanishes(format!("tau = {}", tau.value())));
    }
    let scale = Integer::from(p).pow(2 * (m + 1));
    let v = (&f_top - &f_r).try_div(&den)?.scale_int(&scale);
    finish(v, prec, "f_m")
}

/// The same quotient written as a product of Siegel functions.
pub fn fm_siegel(p: u64, m: u32, tau: &TauPoint, prec: &Prec) -> Result<BigComplex> {
    let pm = check_odd_prime(p, m)?;
    let pi = p as i64;
    let k = (pm / p) as i64;
    let g = |a: i64, b: i64, n: u64| siegel_g(&FracIndex::new(a, b, n)?, tau, prec);
    // [1/p; 1/p^m], [-1/p; 1/p^m] at level p^m
    let num = &(&g(k, 1, pm)? * &g(-k, 1, pm)?) * &g(0, 1, p)?.square();
    let den = &(&g(1, 1, p)? * &g(-1, 1, p)?) * &g(0, 1, pm)?.square();
    let scale = Integer::from(pi).pow(2 * m + 2);
    finish(num.try_div(&den)?.scale_int(&scale), prec, "f_m")
}

#[derive(Clone, Debug, Serialize)]
pub struct FmValue {
    pub p: u64,
    pub m: u32,
    pub ratio: BigComplex,
    pub siegel: BigComplex,
    /// log10 |ratio - siegel|.
    pub agreement_log10: f64,
}

/// f_m(tau), cross-checked between the two formulas to 10^-(digits-12).
pub fn fm_func(p: u64, m: u32, tau: &TauPoint, prec: &Prec) -> Result<FmValue> {
    let ratio = fm_ratio(p, m, tau, prec)?;
    let siegel = fm_siegel(p, m, tau, prec)?;
    let agreement_log10 = rel_diff_log10(&ratio, &siegel);
    if agreement_log10 > -f64::from(prec.digits) + 12.0 {
        return Err(CftError::VerificationFailed(format!(
            "f_{m} formulas disagree at tau = {} (10^{agreement_log10:.1})",
            tau.value()
        )));
    }
    Ok(FmValue {
        p,
        m,
        ratio,
        siegel,
        agreement_log10,
    })
}

/// log10 of |x - y| / max(1, |x|, |y|).
pub fn rel_diff_log10(x: &BigComplex, y: &BigComplex) -> f64 {
    let d = (x - y).abs_log10();
    d - x.abs_log10().max(y.abs_log10()).max(0.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct PtogResidual {
    pub idx1: FracIndex,
    pub idx2: FracIndex,
    pub normalization: EtaNorm,
    pub lhs: BigComplex,
    pub rhs: BigComplex,
    pub residual: BigComplex,
    pub residual_log10: f64,
}

/// p_1 - p_2 against -g_{1+2} g_{1-2} eta^4 / (g_1^2 g_2^2).
pub fn check_ptog(
    idx1: &FracIndex,
    idx2: &FracIndex,
    tau: &TauPoint,
    norm: EtaNorm,
    prec: &Prec,
) -> Result<PtogResidual> {
    if idx1.equiv_pm(idx2) {
        return Err(CftError::IndexCollision);
    }
    let (plus, minus) = idx1.sum_diff(idx2)?;
    let lhs = &wp_value(idx1, tau, prec)? - &wp_value(idx2, tau, prec)?;
    let eta4 = eta(tau, norm, prec)?.pow_u(4);
    let num = &(&siegel_g(&plus, tau, prec)? * &siegel_g(&minus, tau, prec)?) * &eta4;
    let den = &siegel_g(idx1, tau, prec)?.square() * &siegel_g(idx2, tau, prec)?.square();
    let rhs = -num.try_div(&den)?;
    let residual = &lhs - &rhs;
    let residual_log10 = residual.abs_log10();
    Ok(PtogResidual {
        idx1: *idx1,
        idx2: *idx2,
        normalization: norm,
        lhs,
        rhs,
        residual_log10,
        residual,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PtogReport {
    pub paper: PtogResidual,
    pub classical: PtogResidual,
    pub tol_digits: u32,
    /// The normalization whose residual is below 10^-tol_digits, if any.
    pub certified: Option<EtaNorm>,
}

pub fn ptog_certify(
    idx1: &FracIndex,
    idx2: &FracIndex,
    tau: &TauPoint,
    prec: &Prec,
    tol_digits: u32,
) -> Result<PtogReport> {
    let paper = check_ptog(idx1, idx2, tau, EtaNorm::Paper, prec)?;
    let classical = check_ptog(idx1, idx2, tau, EtaNorm::Classical, prec)?;
    let tol = -f64::from(tol_digits);
    let certified = if paper.residual_log10 < tol {
        Some(EtaNorm::Paper)
    } else if classical.residual_log10 < tol {
        Some(EtaNorm::Classical)
    } else {
        None
    };
    Ok(PtogReport {
        paper,
        classical,
        tol_digits,
        certified,
    })
}
