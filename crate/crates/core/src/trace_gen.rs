//! Universal trace generators over cyclotomic fields.
//!
//! For U = Q(zeta_m) over L = Q with intermediate fields F_1, ..., F_l
//! (all fields with Q < F_i <= U), pick integral generators alpha_i of
//! F_i, set N = [U:Q] * prod |N(disc(alpha_i))| and
//! alpha = sum alpha_i / M_i with M_i = 1 + N * prod_{k<i} M_k.
//! Every Tr_{U/F_i}(alpha) then generates F_i.

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::arith::radical;
use crate::coprime::coprime_seq;
use crate::cyclotomic::{
    cyc_reduce, galois_group, generates, rel_discriminant, rel_trace, subgroup_lattice, CycElem,
    Rat, SubgroupData,
};
use crate::error::{CftError, Result};

/// Default retry budget for [`default_subfield_generator`].
pub const DEFAULT_GENERATOR_RETRIES: usize = 256;

#[derive(Clone, Debug, Serialize)]
pub struct FieldCheck {
    /// Fixing group of F_i.
    pub subgroup: Vec<u64>,
    pub degree: usize,
    pub generator: CycElem,
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub discriminant_norm: Rational,
    pub trace: CycElem,
    pub generates: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceGenCertificate {
    pub conductor: u64,
    pub use_radical: bool,
    #[serde(serialize_with = "crate::report::ser_int")]
    pub budget: Integer,
    #[serde(serialize_with = "crate::report::ser_int")]
    pub budget_radical: Integer,
    /// The integer actually fed to the denominator recursion.
    #[serde(serialize_with = "crate::report::ser_int")]
    pub effective_budget: Integer,
    #[serde(serialize_with = "crate::report::ser_ints")]
    pub denominators: Vec<Integer>,
    pub alpha: CycElem,
    pub fields: Vec<FieldCheck>,
}

impl TraceGenCertificate {
    pub fn all_passed(&self) -> bool {
        self.fields.iter().all(|f| f.generates)
    }

    pub fn check(&self) -> Result<()> {
        match self.fields.iter().find(|f| !f.generates) {
            None => Ok(()),
            Some(f) => Err(CftError::VerificationFailed(format!(
                "Tr(alpha) does not generate the field fixed by {:?} (conductor {})",
                f.subgroup, self.conductor
            ))),
        }
    }
}

/// The fields F_i in construction order: increasing degree over Q, i.e.
/// fixing groups by decreasing size, ties broken lexicographically.
pub fn intermediate_fields(m: u64) -> Result<Vec<SubgroupData>> {
    let mut subs = subgroup_lattice(m)?;
    subs.sort_by(|a, b| b.order().cmp(&a.order()).then_with(|| a.elements.cmp(&b.elements)));
    Ok(subs)
}

/// An algebraic-integer generator of Fix(H) over Q: the Gaussian period
/// when it works, otherwise traces of other small integral elements.
pub fn default_subfield_generator(h: &SubgroupData) -> Result<CycElem> {
    subfield_generator_with_budget(h, DEFAULT_GENERATOR_RETRIES)
}

pub fn subfield_generator_with_budget(h: &SubgroupData, retries: usize) -> Result<CycElem> {
    let m = h.m;
    let full = galois_group(m)?.as_subgroup();
    if h.order() >= full.order() || !h.is_subgroup_of(&full) {
        return Err(CftError::InvalidSubgroup(format!(
            "{:?} is not a proper subgroup of (Z/{m}Z)^x",
            h.elements
        )));
    }
    let one = Rat::from(1);
    let two = Rat::from(2);
    // periods of zeta^t for coset representatives, then of every power,
    // then of zeta^j + 2 zeta^k
    let unit_reps = full.coset_reps(h)?;
    let others = (0..m as i64).filter(|&k| !unit_reps.contains(&(k as u64)));
    let singles = unit_reps.iter().map(|&t| t as i64).chain(others);
    let pairs = (0..m as i64).flat_map(|j| (j + 1..m as i64).map(move |k| (j, k)));
    let candidates = singles
        .map(|k| vec![(k, one.clone())])
        .chain(pairs.map(|(j, k)| vec![(j, one.clone()), (k, two.clone())]));
    for raw in candidates.take(retries) {
        let y = cyc_reduce(m, raw)?;
        let x = rel_trace(&y, h)?;
        if !x.is_zero() && generates(&x, h, &full)? {
            debug_assert!(x.is_algebraic_integer());
            return Ok(x);
        }
    }
    Err(CftError::GeneratorSearchExhausted(h.elements.clone()))
}

/// N = [U:Q] * prod |N_{Q}(disc(alpha_i, F_i/Q))| and its radical.
pub fn trace_budget(m: u64, generators: &[(SubgroupData, CycElem)]) -> Result<(Integer, Integer)> {
    let full = galois_group(m)?.as_subgroup();
    let mut n = Integer::from(full.order());
    for (h, a) in generators {
        if !a.is_algebraic_integer() {
            return Err(CftError::NotAlgebraicInteger);
        }
        let d = rel_discriminant(a, h, &full)?;
        if *d.denom() != 1 {
            return Err(CftError::NotAlgebraicInteger);
        }
        n *= d.numer();
    }
    let rad = radical(&n);
    Ok((n, rad))
}

/// Runs the construction and records every per-field check without
/// failing on a negative one; see [`build_trace_generator`].
pub fn construct_trace_generator(m: u64, use_radical: bool) -> Result<TraceGenCertificate> {
    construct_trace_generator_with(m, use_radical, None, DEFAULT_GENERATOR_RETRIES)
}

/// Same as [`construct_trace_generator`] but feeds `budget` to the
/// denominator recursion; it must be divisible by every prime of N.
pub fn construct_with_budget(m: u64, budget: &Integer) -> Result<TraceGenCertificate> {
    construct_trace_generator_with(m, false, Some(budget), DEFAULT_GENERATOR_RETRIES)
}

/// Full control: explicit budget (else N or rad N) and generator retry budget.
pub fn construct_trace_generator_with(
    m: u64,
    use_radical: bool,
    budget_override: Option<&Integer>,
    retries: usize,
) -> Result<TraceGenCertificate> {
    let full = galois_group(m)?.as_subgroup();
    let fields = intermediate_fields(m)?;
    let gens: Vec<(SubgroupData, CycElem)> = fields
        .iter()
        .map(|h| Ok((h.clone(), subfield_generator_with_budget(h, retries)?)))
        .collect::<Result<_>>()?;
    let (budget, budget_radical) = trace_budget(m, &gens)?;
    let effective = match budget_override {
        Some(b) => {
            if *b <= 0 || !b.is_divisible(&budget_radical) {
                return Err(CftError::InvalidArgument(format!(
                    "budget {b} is not divisible by rad(N) = {budget_radical}"
                )));
            }
            b.clone()
        }
        None if use_radical => budget_radical.clone(),
        None => budget.clone(),
    };
    let seq = coprime_seq(&vec![effective.clone(); gens.len()])?;
    let mut alpha = CycElem::zero(m);
    for ((_, a), mi) in gens.iter().zip(&seq.outputs) {
        alpha = &alpha + &a.scale(&Rat::from((1, mi.clone())));
    }
    let checks = gens
        .par_iter()
        .map(|(h, a)| {
            let discriminant_norm = rel_discriminant(a, h, &full)?;
            let trace = rel_trace(&alpha, h)?;
            let ok = generates(&trace, h, &full)?;
            Ok(FieldCheck {
                subgroup: h.elements.clone(),
                degree: full.order() / h.order(),
                generator: a.clone(),
                discriminant_norm,
                trace,
                generates: ok,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TraceGenCertificate {
        conductor: m,
        use_radical: budget_override.is_none() && use_radical,
        budget,
        budget_radical,
        effective_budget: effective,
        denominators: seq.outputs,
        alpha,
        fields: checks,
    })
}

/// Builds the universal trace generator and fails loudly if any relative
/// trace does not generate its field.
pub fn build_trace_generator(m: u64, use_radical: bool) -> Result<TraceGenCertificate> {
    let cert = construct_trace_generator(m, use_radical)?;
    cert.check()?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg(m: u64, e: &[u64]) -> SubgroupData {
        SubgroupData::new(m, e.iter().copied()).unwrap()
    }

    fn period(m: u64, h: &[u64]) -> CycElem {
        cyc_reduce(m, h.iter().map(|&a| (a as i64, Rat::from(1)))).unwrap()
    }

    #[test]
    fn generator_defaults() {
        assert_eq!(default_subfield_generator(&sg(5, &[1, 4])).unwrap(), period(5, &[1, 4]));
        assert_eq!(default_subfield_generator(&sg(5, &[1])).unwrap(), CycElem::zeta(5));
        // zeta_12 + zeta_12^11 = sqrt(3)
        let s3 = default_subfield_generator(&sg(12, &[1, 11])).unwrap();
        assert_eq!(&s3 * &s3, CycElem::from_int(12, 3));
        assert!(default_subfield_generator(&SubgroupData::full(5)).is_err());
    }

    #[test]
    fn vanishing_period_falls_back() {
        // zeta_12 + zeta_12^7 = 0, so the period is useless for {1, 7}
        let h = sg(12, &[1, 7]);
        assert!(period(12, &[1, 7]).is_zero());
        let g = default_subfield_generator(&h).unwrap();
        let full = SubgroupData::full(12);
        assert!(generates(&g, &h, &full).unwrap());
        assert_eq!(
            subfield_generator_with_budget(&h, 2).unwrap_err(),
            CftError::GeneratorSearchExhausted(vec![1, 7])
        );
    }

    #[test]
    fn budgets() {
        let sqrt5 = &period(5, &[1, 4]).scale(&Rat::from(2)) + &CycElem::one(5);
        let (n, r) = trace_budget(
            5,
            &[(sg(5, &[1, 4]), sqrt5), (sg(5, &[1]), CycElem::zeta(5))],
        )
        .unwrap();
        assert_eq!((n, r), (Integer::from(10000), Integer::from(10)));
        let (n, r) = trace_budget(4, &[(sg(4, &[1]), CycElem::zeta(4))]).unwrap();
        assert_eq!((n, r), (Integer::from(8), Integer::from(2)));
        let (n, r) = trace_budget(3, &[(sg(3, &[1]), CycElem::zeta(3))]).unwrap();
        assert_eq!((n, r), (Integer::from(6), Integer::from(6)));
        let half = CycElem::zeta(3).scale(&Rat::from((1, 2)));
        assert_eq!(
            trace_budget(3, &[(sg(3, &[1]), half)]).unwrap_err(),
            CftError::NotAlgebraicInteger
        );
    }

    #[test]
    fn conductor_five() {
        let cert = build_trace_generator(5, true).unwrap();
        assert_eq!(cert.budget_radical, 10);
        assert_eq!(cert.denominators, vec![Integer::from(11), Integer::from(111)]);
        let expected = &period(5, &[1, 4]).scale(&Rat::from((1, 11)))
            + &CycElem::zeta(5).scale(&Rat::from((1, 111)));
        assert_eq!(cert.alpha, expected);
        assert_eq!(cert.fields.len(), 2);
        assert!(cert.all_passed());
    }

    #[test]
    fn conductor_three_is_single_field() {
        let cert = build_trace_generator(3, true).unwrap();
        assert_eq!(cert.fields.len(), 1);
        assert_eq!(cert.denominators, vec![Integer::from(7)]);
        assert_eq!(cert.alpha, CycElem::zeta(3).scale(&Rat::from((1, 7))));
    }

    #[test]
    fn degenerate_conductor() {
        assert_eq!(
            build_trace_generator(2, true).unwrap_err(),
            CftError::DegenerateExtension(2)
        );
    }
}
