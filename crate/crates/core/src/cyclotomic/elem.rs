use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rug::{Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::field::CycField;
use super::poly::QPoly;
use crate::arith::{gcd_i64, lcm, units_mod};
use crate::error::{CftError, Result};

/// Exact rational number; reduced with a positive denominator.
pub type Rat = Rational;

/// An element of Q(zeta_m), stored as rational coordinates in the
/// power basis 1, zeta_m, ..., zeta_m^(phi(m)-1).
#[derive(Clone)]
pub struct CycElem {
    field: Arc<CycField>,
    coeffs: Vec<Rat>,
}

/// Arithmetic operation selector for [`cyc_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Canonical representative of `sum raw[e] * zeta_m^e`.
pub fn cyc_reduce<I>(m: u64, raw: I) -> Result<CycElem>
where
    I: IntoIterator<Item = (i64, Rat)>,
{
    if m == 0 {
        return Err(CftError::ZeroConductor);
    }
    let field = CycField::get(m);
    let mut coeffs = vec![Rat::new(); field.degree()];
    for (e, c) in raw {
        if c == 0 {
            continue;
        }
        for (slot, &p) in coeffs.iter_mut().zip(field.power(e)) {
            if p != 0 {
                *slot += Rat::from(&c * p);
            }
        }
    }
    Ok(CycElem { field, coeffs })
}

pub fn cyc_arith(x: &CycElem, y: &CycElem, op: ArithOp) -> Result<CycElem> {
    Ok(match op {
        ArithOp::Add => x + y,
        ArithOp::Sub => x - y,
        ArithOp::Mul => x * y,
        ArithOp::Div => x.try_div(y)?,
    })
}

impl CycElem {
    pub fn from_coeffs(m: u64, coeffs: Vec<Rat>) -> Result<Self> {
        if m == 0 {
            return Err(CftError::ZeroConductor);
        }
        let field = CycField::get(m);
        if coeffs.len() != field.degree() {
            return Err(CftError::InvalidArgument(format!(
                "expected {} coordinates for conductor {m}, got {}",
                field.degree(),
                coeffs.len()
            )));
        }
        Ok(CycElem { field, coeffs })
    }

    pub fn zero(m: u64) -> Self {
        cyc_reduce(m, []).expect("positive conductor")
    }

    pub fn from_rat(m: u64, q: Rat) -> Self {
        cyc_reduce(m, [(0, q)]).expect("positive conductor")
    }

    pub fn from_int(m: u64, n: i64) -> Self {
        Self::from_rat(m, Rat::from(n))
    }

    pub fn one(m: u64) -> Self {
        Self::from_int(m, 1)
    }

    /// zeta_m^k.
    pub fn zeta_pow(m: u64, k: i64) -> Self {
        cyc_reduce(m, [(k, Rat::from(1))]).expect("positive conductor")
    }

    pub fn zeta(m: u64) -> Self {
        Self::zeta_pow(m, 1)
    }

    pub fn conductor(&self) -> u64 {
        self.field.conductor()
    }

    /// phi(m), the length of the coordinate vector.
    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0)
    }

    /// The rational value, when the element lies in Q.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.coeffs[1..].iter().all(|c| *c == 0) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn sparse(&self) -> impl Iterator<Item = (i64, &Rat)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| (i as i64, c))
    }

    /// The same element viewed in Q(zeta_target); `m` must divide `target`.
    pub fn lift(&self, target: u64) -> Result<CycElem> {
        let m = self.conductor();
        if target == m {
            return Ok(self.clone());
        }
        if target == 0 || !target.is_multiple_of(m) {
            return Err(CftError::ConductorMismatch(m, target));
        }
        let step = (target / m) as i64;
        cyc_reduce(target, self.sparse().map(|(i, c)| (i * step, c.clone())))
    }

    fn common(&self, other: &CycElem) -> (CycElem, CycElem) {
        let m = lcm(self.conductor(), other.conductor());
        (
            self.lift(m).expect("lcm conductor"),
            other.lift(m).expect("lcm conductor"),
        )
    }

    pub fn scale(&self, q: &Rat) -> CycElem {
        CycElem {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| Rat::from(c * q)).collect(),
        }
    }

    fn mul_same(&self, other: &CycElem) -> CycElem {
        let phi = self.degree();
        let mut raw = vec![Rat::new(); 2 * phi - 1];
        for (i, a) in self.sparse() {
            for (j, b) in other.sparse() {
                raw[(i + j) as usize] += Rat::from(a * b);
            }
        }
        let mut coeffs = vec![Rat::new(); phi];
        for (k, c) in raw.into_iter().enumerate() {
            if c == 0 {
                continue;
            }
            if k < phi {
                coeffs[k] += c;
                continue;
            }
            for (slot, &p) in coeffs.iter_mut().zip(self.field.power(k as i64)) {
                if p != 0 {
                    *slot += Rat::from(&c * p);
                }
            }
        }
        CycElem {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn inv(&self) -> Result<CycElem> {
        if self.is_zero() {
            return Err(CftError::DivisionByZero);
        }
        let mut a = QPoly(self.coeffs.clone());
        a.trim();
        let modulus = QPoly::from_ints(self.field.modulus());
        let inv = QPoly::inverse_mod(&a, &modulus)
            .expect("Phi_m is irreducible, so nonzero elements are invertible");
        let mut coeffs = inv.0;
        coeffs.resize(self.degree(), Rat::new());
        Ok(CycElem {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn try_div(&self, other: &CycElem) -> Result<CycElem> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, n: i64) -> Result<CycElem> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = CycElem::one(self.conductor());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Image under zeta_m -> zeta_m^a.
    pub fn apply(&self, a: i64) -> Result<CycElem> {
        let m = self.conductor();
        if gcd_i64(a, m as i64) != 1 {
            return Err(CftError::NotAUnit { a, m });
        }
        cyc_reduce(m, self.sparse().map(|(i, c)| (i * a, c.clone())))
    }

    /// All conjugates x^{sigma_a}, a running over (Z/mZ)^x ascending.
    pub fn conjugates(&self) -> Vec<CycElem> {
        units_mod(self.conductor())
            .into_iter()
            .map(|a| self.apply(a as i64).expect("unit"))
            .collect()
    }

    /// Absolute norm N_{Q(zeta_m)/Q}.
    pub fn norm_to_q(&self) -> Rat {
        let prod = self
            .conjugates()
            .iter()
            .fold(CycElem::one(self.conductor()), |acc, c| &acc * c);
        prod.as_rational()
            .expect("absolute norm lies in Q")
    }

    pub fn trace_to_q(&self) -> Rat {
        let m = self.conductor();
        let sum = self
            .conjugates()
            .iter()
            .fold(CycElem::zero(m), |acc, c| &acc + c);
        sum.as_rational().expect("absolute trace lies in Q")
    }

    /// Characteristic polynomial over Q (monic, lowest degree first) of
    /// multiplication by this element on Q(zeta_m).
    pub fn charpoly(&self) -> Vec<Rat> {
        let m = self.conductor();
        // coefficients are elements of Q(zeta_m) until the end
        let mut poly: Vec<CycElem> = vec![CycElem::one(m)];
        for c in self.conjugates() {
            let mut next = vec![CycElem::zero(m); poly.len() + 1];
            for (i, p) in poly.iter().enumerate() {
                next[i + 1] = &next[i + 1] + p;
                next[i] = &next[i] - &(p * &c);
            }
            poly = next;
        }
        poly.into_iter()
            .map(|c| c.as_rational().expect("charpoly has rational coefficients"))
            .collect()
    }

    /// Integrality via the characteristic polynomial over Q.
    pub fn is_algebraic_integer(&self) -> bool {
        if self.coeffs.iter().all(|c| *c.denom() == 1) {
            return true;
        }
        self.charpoly().iter().all(|c| *c.denom() == 1)
    }

    /// Coordinates as "p/q" strings.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> Integer {
        self.coeffs
            .iter()
            .fold(Integer::from(1), |acc, c| acc.lcm(c.denom()))
    }
}

impl PartialEq for CycElem {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor() == other.conductor() {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycElem {}

impl fmt::Debug for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycElem(m={}, {})", self.conductor(), self)
    }
}

impl fmt::Display for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.sparse() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&CycElem> for &CycElem {
            type Output = CycElem;
            fn $method(self, rhs: &CycElem) -> CycElem {
                let f: fn(&CycElem, &CycElem) -> CycElem = $body;
                if self.conductor() == rhs.conductor() {
                    f(self, rhs)
                } else {
                    let (a, b) = self.common(rhs);
                    f(&a, &b)
                }
            }
        }
        impl $tr<CycElem> for CycElem {
            type Output = CycElem;
            fn $method(self, rhs: CycElem) -> CycElem {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| CycElem {
    field: a.field.clone(),
    coeffs: a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(x, y)| Rat::from(x + y))
        .collect(),
});
binop!(Sub, sub, |a, b| CycElem {
    field: a.field.clone(),
    coeffs: a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(x, y)| Rat::from(x - y))
        .collect(),
});
binop!(Mul, mul, |a, b| a.mul_same(b));

impl Neg for &CycElem {
    type Output = CycElem;
    fn neg(self) -> CycElem {
        self.scale(&Rat::from(-1))
    }
}

#[derive(Serialize, Deserialize)]
struct CycElemRepr {
    m: u64,
    coeffs: Vec<String>,
}

impl Serialize for CycElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycElemRepr {
            m: self.conductor(),
            coeffs: self.coeff_strings(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let repr = CycElemRepr::deserialize(d)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| parse_rat(s).map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CycElem::from_coeffs(repr.m, coeffs).map_err(D::Error::custom)
    }
}

/// Parses "p", "p/q" or a terminating decimal.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let num: Integer = digits
            .parse()
            .map_err(|_| CftError::InvalidArgument(format!("bad rational {s:?}")))?;
        let den = Integer::from(Integer::u_pow_u(10, frac.len() as u32));
        let q = Rat::from((num, den));
        return Ok(if neg { -q } else { q });
    }
    s.parse::<Rat>()
        .map_err(|_| CftError::InvalidArgument(format!("bad rational {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from(n)
    }

    #[test]
    fn reduce_examples() {
        let x = cyc_reduce(3, [(1, r(1)), (2, r(1))]).unwrap();
        assert_eq!(x.coeffs(), &[r(-1), r(0)]);
        let y = cyc_reduce(4, [(2, r(1))]).unwrap();
        assert_eq!(y.coeffs(), &[r(-1), r(0)]);
        let z = cyc_reduce(5, (0..5).map(|e| (e, r(1)))).unwrap();
        assert!(z.is_zero());
        assert_eq!(cyc_reduce(0, []).unwrap_err(), CftError::ZeroConductor);
    }

    #[test]
    fn arith_examples() {
        let z3 = CycElem::zeta(3);
        assert_eq!(&z3 * &CycElem::zeta_pow(3, 2), CycElem::one(3));
        let a = cyc_reduce(5, [(1, r(1)), (4, r(1))]).unwrap();
        let b = cyc_reduce(5, [(2, r(1)), (3, r(1))]).unwrap();
        assert_eq!(&a + &b, CycElem::from_int(5, -1));
        let one_plus = &CycElem::one(3) + &z3;
        let inv = one_plus.inv().unwrap();
        assert_eq!(&inv * &one_plus, CycElem::one(3));
        // 1 + z = -z^2, so the inverse is -z^{-2} = -z
        assert_eq!(inv, -&z3);
        assert_eq!(
            cyc_arith(&z3, &CycElem::zero(3), ArithOp::Div).unwrap_err(),
            CftError::DivisionByZero
        );
    }

    #[test]
    fn mixed_conductors_lift_to_lcm() {
        let s = &CycElem::zeta(3) + &CycElem::zeta(4);
        assert_eq!(s.conductor(), 12);
        assert_eq!(s, &CycElem::zeta_pow(12, 4) + &CycElem::zeta_pow(12, 3));
        // Q(zeta_6) = Q(zeta_3): zeta_6 = -zeta_3^2
        assert_eq!(CycElem::zeta(6), -&CycElem::zeta_pow(3, 2));
    }

    #[test]
    fn automorphism_examples() {
        let z3 = CycElem::zeta(3);
        assert_eq!(z3.apply(2).unwrap(), CycElem::zeta_pow(3, 2));
        assert_eq!(z3.apply(1).unwrap(), z3);
        let p = cyc_reduce(5, [(1, r(1)), (4, r(1))]).unwrap();
        let q = cyc_reduce(5, [(2, r(1)), (3, r(1))]).unwrap();
        assert_eq!(p.apply(2).unwrap(), q);
        assert_eq!(
            z3.apply(3).unwrap_err(),
            CftError::NotAUnit { a: 3, m: 3 }
        );
    }

    #[test]
    fn norms_and_charpolys() {
        assert_eq!(CycElem::zeta(5).norm_to_q(), 1);
        assert_eq!(CycElem::zeta(5).trace_to_q(), -1);
        let two = CycElem::from_int(7, 2);
        assert_eq!(two.norm_to_q(), 64);
        // 1 - zeta_p has norm p
        let x = &CycElem::one(7) - &CycElem::zeta(7);
        assert_eq!(x.norm_to_q(), 7);
        assert_eq!(CycElem::zeta(4).charpoly(), vec![r(1), r(0), r(1)]);
        let half = CycElem::zeta(5).scale(&Rat::from((1, 2)));
        assert!(!half.is_algebraic_integer());
        assert!(CycElem::zeta(5).is_algebraic_integer());
    }

    #[test]
    fn json_shape() {
        let x = CycElem::zeta(3).scale(&Rat::from((2, 3)));
        let j = serde_json::to_string(&x).unwrap();
        assert_eq!(j, r#"{"m":3,"coeffs":["0","2/3"]}"#);
        let back: CycElem = serde_json::from_str(&j).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rat("3/6").unwrap(), Rat::from((1, 2)));
        assert_eq!(parse_rat("-0.25").unwrap(), Rat::from((-1, 4)));
        assert!(parse_rat("x").is_err());
    }
}
