//! Arbitrary-precision complex numbers on MPFR floats.
//!
//! Precision is carried in decimal digits. Binary operations run at the
//! larger of the two operand precisions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Serialize, Serializer};

use crate::error::{CftError, Result};

pub const MIN_DIGITS: u32 = 16;
const GUARD_BITS: u32 = 64;

/// Working bits for a decimal precision.
pub fn bits_for(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
}

/// Requested precision and series truncation target (both in decimal digits).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Prec {
    pub digits: u32,
    /// Series are truncated once the tail is below 10^-tail_digits.
    pub tail_digits: u32,
}

impl Prec {
    pub fn new(digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(CftError::InvalidArgument(format!(
                "precision must be at least {MIN_DIGITS} digits"
            )));
        }
        Ok(Prec {
            digits,
            tail_digits: digits + 10,
        })
    }

    pub fn with_tail(self, tail_digits: u32) -> Self {
        Prec {
            tail_digits,
            ..self
        }
    }

    pub fn bits(&self) -> u32 {
        bits_for(self.digits.max(self.tail_digits))
    }

    /// log10 of the truncation threshold.
    pub fn eps_log10(&self) -> f64 {
        -f64::from(self.tail_digits)
    }
}

#[derive(Clone, PartialEq)]
pub struct BigComplex {
    re: Float,
    im: Float,
    digits: u32,
}

impl BigComplex {
    pub fn new(re: Float, im: Float, digits: u32) -> Self {
        let bits = bits_for(digits);
        BigComplex {
            re: Float::with_val(bits, re),
            im: Float::with_val(bits, im),
            digits,
        }
    }

    pub fn from_f64(re: f64, im: f64, digits: u32) -> Self {
        let bits = bits_for(digits);
        BigComplex {
            re: Float::with_val(bits, re),
            im: Float::with_val(bits, im),
            digits,
        }
    }

    pub fn from_rational(re: &Rational, im: &Rational, digits: u32) -> Self {
        let bits = bits_for(digits);
        BigComplex {
            re: Float::with_val(bits, re),
            im: Float::with_val(bits, im),
            digits,
        }
    }

    pub fn from_int(n: i64, digits: u32) -> Self {
        Self::from_f64(0.0, 0.0, digits).add_real_int(n)
    }

    pub fn from_real(re: Float, digits: u32) -> Self {
        let bits = bits_for(digits);
        BigComplex {
            re: Float::with_val(bits, re),
            im: Float::new(bits),
            digits,
        }
    }

    pub fn zero(digits: u32) -> Self {
        Self::from_f64(0.0, 0.0, digits)
    }

    pub fn one(digits: u32) -> Self {
        Self::from_f64(1.0, 0.0, digits)
    }

    pub fn i(digits: u32) -> Self {
        Self::from_f64(0.0, 1.0, digits)
    }

    /// Parses "re,im" where each part is a decimal or p/q.
    pub fn parse(s: &str, digits: u32) -> Result<Self> {
        let bad = || CftError::InvalidArgument(format!("cannot parse complex number {s:?}"));
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        let part = |t: &str| -> Result<Float> {
            let t = t.trim();
            let bits = bits_for(digits);
            if let Some((p, q)) = t.split_once('/') {
                let r = Rational::from((
                    p.trim().parse::<Integer>().map_err(|_| bad())?,
                    q.trim().parse::<Integer>().map_err(|_| bad())?,
                ));
                if *r.denom() == 0 {
                    return Err(bad());
                }
                Ok(Float::with_val(bits, &r))
            } else {
                let v = Float::parse(t).map_err(|_| bad())?;
                Ok(Float::with_val(bits, v))
            }
        };
        Ok(BigComplex {
            re: part(a)?,
            im: part(b)?,
            digits,
        })
    }

    pub fn pi(digits: u32) -> Float {
        Float::with_val(bits_for(digits), Constant::Pi)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn bits(&self) -> u32 {
        bits_for(self.digits)
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn with_digits(&self, digits: u32) -> Self {
        Self::new(self.re.clone(), self.im.clone(), digits)
    }

    fn pair_digits(&self, other: &Self) -> u32 {
        self.digits.max(other.digits)
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.bits(), self.re.hypot_ref(&self.im))
    }

    /// log10 |z|, or -inf for zero.
    pub fn abs_log10(&self) -> f64 {
        let a = self.abs();
        if a.is_zero() {
            return f64::NEG_INFINITY;
        }
        a.log10().to_f64()
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.bits(), self.im.atan2_ref(&self.re))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            re: self.re.clone(),
            im: Float::with_val(self.bits(), -&self.im),
            digits: self.digits,
        }
    }

    pub fn scale(&self, f: &Float) -> Self {
        let bits = self.bits();
        BigComplex {
            re: Float::with_val(bits, &self.re * f),
            im: Float::with_val(bits, &self.im * f),
            digits: self.digits,
        }
    }

    pub fn scale_int(&self, n: &Integer) -> Self {
        let bits = self.bits();
        BigComplex {
            re: Float::with_val(bits, &self.re * n),
            im: Float::with_val(bits, &self.im * n),
            digits: self.digits,
        }
    }

    pub fn scale_rat(&self, r: &Rational) -> Self {
        let bits = self.bits();
        BigComplex {
            re: Float::with_val(bits, &self.re * r),
            im: Float::with_val(bits, &self.im * r),
            digits: self.digits,
        }
    }

    pub fn add_real_int(&self, n: i64) -> Self {
        BigComplex {
            re: Float::with_val(self.bits(), &self.re + n),
            im: self.im.clone(),
            digits: self.digits,
        }
    }

    /// Multiplication by i.
    pub fn mul_i(&self) -> Self {
        BigComplex {
            re: Float::with_val(self.bits(), -&self.im),
            im: self.re.clone(),
            digits: self.digits,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(CftError::DivisionByZero);
        }
        let bits = self.bits();
        let n = Float::with_val(bits, self.re.square_ref()) + Float::with_val(bits, self.im.square_ref());
        Ok(BigComplex {
            re: Float::with_val(bits, &self.re / &n),
            im: Float::with_val(bits, -(Float::with_val(bits, &self.im / &n))),
            digits: self.digits,
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn pow_u(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = BigComplex::one(self.digits);
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn pow_i(&self, n: i64) -> Result<Self> {
        if n >= 0 {
            Ok(self.pow_u(n as u64))
        } else {
            Ok(self.inv()?.pow_u(n.unsigned_abs()))
        }
    }

    pub fn exp(&self) -> Self {
        let bits = self.bits();
        let r = Float::with_val(bits, self.re.exp_ref());
        let (s, c) = Float::with_val(bits, &self.im).sin_cos(Float::new(bits));
        BigComplex {
            re: Float::with_val(bits, &r * &c),
            im: r * s,
            digits: self.digits,
        }
    }

    /// e^{i x} for real x.
    pub fn expi(x: &Float, digits: u32) -> Self {
        let bits = bits_for(digits);
        let (s, c) = Float::with_val(bits, x).sin_cos(Float::new(bits));
        BigComplex {
            re: c,
            im: s,
            digits,
        }
    }

    /// e^{2 pi i z}.
    pub fn exp_2pi_i(z: &Self) -> Self {
        let two_pi = Float::with_val(z.bits(), Self::pi(z.digits) * 2u32);
        z.scale(&two_pi).mul_i().exp()
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let bits = self.bits();
        let r = self.abs();
        if r.is_zero() {
            return self.clone();
        }
        let mut a = Float::with_val(bits, &r + &self.re) / 2u32;
        a = a.sqrt();
        let mut b = Float::with_val(bits, &r - &self.re) / 2u32;
        b = b.sqrt();
        if self.im.is_sign_negative() {
            b = -b;
        }
        BigComplex {
            re: a,
            im: b,
            digits: self.digits,
        }
    }

    /// |z - w| as f64 log10, -inf when equal.
    pub fn dist_log10(&self, other: &Self) -> f64 {
        (self - other).abs_log10()
    }

    /// Nearest Gaussian integer, rounded independently.
    pub fn round_parts(&self) -> (Integer, Integer) {
        let r = self.re.clone().round().to_integer().unwrap_or_default();
        let i = self.im.clone().round().to_integer().unwrap_or_default();
        (r, i)
    }

    /// Fixed-point decimal string with `frac` digits after the point.
    pub fn fixed(x: &Float, frac: u32) -> String {
        if !x.is_finite() {
            return x.to_string();
        }
        let scale = Integer::from(Integer::u_pow_u(10, frac));
        let scaled = Float::with_val(x.prec() + 8, x * &scale).round();
        let n = scaled.to_integer().unwrap_or_default();
        let neg = n < 0;
        let mut s = n.abs().to_string();
        if frac > 0 {
            let frac = frac as usize;
            if s.len() <= frac {
                s = format!("{}{}", "0".repeat(frac + 1 - s.len()), s);
            }
            s.insert(s.len() - frac, '.');
        }
        if neg {
            s.insert(0, '-');
        }
        s
    }

    pub fn re_string(&self, frac: u32) -> String {
        Self::fixed(&self.re, frac)
    }

    pub fn im_string(&self, frac: u32) -> String {
        Self::fixed(&self.im, frac)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, o: &BigComplex) -> BigComplex {
        let digits = self.pair_digits(o);
        let bits = bits_for(digits);
        BigComplex {
            re: Float::with_val(bits, &self.re + &o.re),
            im: Float::with_val(bits, &self.im + &o.im),
            digits,
        }
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &BigComplex) -> BigComplex {
        let digits = self.pair_digits(o);
        let bits = bits_for(digits);
        BigComplex {
            re: Float::with_val(bits, &self.re - &o.re),
            im: Float::with_val(bits, &self.im - &o.im),
            digits,
        }
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &BigComplex) -> BigComplex {
        let digits = self.pair_digits(o);
        let bits = bits_for(digits);
        let ac = Float::with_val(bits, &self.re * &o.re);
        let bd = Float::with_val(bits, &self.im * &o.im);
        let ad = Float::with_val(bits, &self.re * &o.im);
        let bc = Float::with_val(bits, &self.im * &o.re);
        BigComplex {
            re: ac - bd,
            im: ad + bc,
            digits,
        }
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex {
            re: Float::with_val(self.bits(), -&self.re),
            im: Float::with_val(self.bits(), -&self.im),
            digits: self.digits,
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $f(self, o: BigComplex) -> BigComplex { (&self).$f(&o) }
        }
        impl $tr<&BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $f(self, o: &BigComplex) -> BigComplex { (&self).$f(o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        -&self
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = f.precision().unwrap_or(20);
        let (re, im) = (
            self.re.to_string_radix(10, Some(n)),
            self.im.to_string_radix(10, Some(n)),
        );
        write!(f, "({re}, {im})")
    }
}

impl Serialize for BigComplex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("BigComplex", 3)?;
        st.serialize_field("re", &self.re_string(self.digits))?;
        st.serialize_field("im", &self.im_string(self.digits))?;
        st.serialize_field("digits", &self.digits)?;
        st.end()
    }
}

/// sqrt(2 pi) at the given precision.
pub fn sqrt_two_pi(digits: u32) -> Float {
    (BigComplex::pi(digits) * 2u32).sqrt()
}

/// 10^e as a float.
pub fn pow10(e: i32, digits: u32) -> Float {
    Float::with_val(bits_for(digits), 10u32).pow(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let z = BigComplex::from_f64(1.0, 2.0, 50);
        let w = BigComplex::from_f64(-3.0, 0.5, 50);
        let q = z.try_div(&w).unwrap();
        assert!((&(&q * &w) - &z).abs_log10() < -45.0);
        assert_eq!((&z * &z.inv().unwrap()).round_parts(), (Integer::from(1), Integer::from(0)));
        assert!(BigComplex::zero(20).inv().is_err());
    }

    #[test]
    fn max_precision_rule() {
        let a = BigComplex::one(20);
        let b = BigComplex::one(100);
        assert_eq!((&a + &b).digits(), 100);
        assert_eq!((&a * &b).digits(), 100);
    }

    #[test]
    fn euler() {
        let d = 60;
        let ipi = BigComplex::from_real(BigComplex::pi(d), d).mul_i();
        let e = ipi.exp().add_real_int(1);
        assert!(e.abs_log10() < -55.0);
        let half = BigComplex::from_f64(0.5, 0.0, d);
        assert!(BigComplex::exp_2pi_i(&half).add_real_int(1).abs_log10() < -55.0);
    }

    #[test]
    fn sqrt_branch() {
        let d = 40;
        let m7 = BigComplex::from_int(-7, d);
        let r = m7.sqrt();
        assert!(r.im().is_sign_positive());
        assert!((&r.square() - &m7).abs_log10() < -35.0);
        let z = BigComplex::from_f64(-1.0, -1e-30, d).sqrt();
        assert!(z.im().is_sign_negative());
    }

    #[test]
    fn fixed_strings() {
        let x = Float::with_val(200, -1.25);
        assert_eq!(BigComplex::fixed(&x, 3), "-1.250");
        assert_eq!(BigComplex::fixed(&Float::with_val(200, 0.0625), 2), "0.06");
        assert_eq!(BigComplex::fixed(&Float::with_val(200, 1728), 0), "1728");
        let z = BigComplex::parse("1/3,-2.5", 30).unwrap();
        assert_eq!(z.re_string(5), "0.33333");
        assert_eq!(z.im_string(1), "-2.5");
        assert!(BigComplex::parse("1;2", 30).is_err());
    }

    #[test]
    fn prec_guard() {
        assert!(Prec::new(8).is_err());
        let p = Prec::new(128).unwrap();
        assert_eq!(p.tail_digits, 138);
        assert!(p.bits() > 450);
    }
}
