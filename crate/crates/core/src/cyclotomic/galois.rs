//! Galois group of Q(zeta_m)/Q and its subgroup lattice. Intermediate
//! fields are never represented directly: a field is "fixed by H".

use std::collections::BTreeSet;

use serde::Serialize;

use super::elem::{CycElem, Rat};
use crate::arith::{gcd, units_mod};
use crate::error::{CftError, Result};

/// zeta_m -> zeta_m^a.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GaloisAut {
    pub m: u64,
    pub a: u64,
}

impl GaloisAut {
    pub fn new(m: u64, a: i64) -> Result<Self> {
        if m == 0 {
            return Err(CftError::ZeroConductor);
        }
        let r = a.rem_euclid(m as i64) as u64;
        if gcd(r, m) != 1 {
            return Err(CftError::NotAUnit { a, m });
        }
        Ok(GaloisAut { m, a: r })
    }

    pub fn compose(&self, other: &GaloisAut) -> GaloisAut {
        assert_eq!(self.m, other.m);
        GaloisAut {
            m: self.m,
            a: self.a * other.a % self.m,
        }
    }
}

/// Image of `x` under `sigma`; `x` is lifted to the automorphism's conductor.
pub fn apply_aut(sigma: &GaloisAut, x: &CycElem) -> Result<CycElem> {
    x.lift(sigma.m)?.apply(sigma.a as i64)
}

/// (Z/mZ)^x with the identity first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaloisGroup {
    pub m: u64,
    pub elements: Vec<u64>,
}

impl GaloisGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn as_subgroup(&self) -> SubgroupData {
        SubgroupData {
            m: self.m,
            elements: self.elements.clone(),
        }
    }
}

pub fn galois_group(m: u64) -> Result<GaloisGroup> {
    if m == 0 {
        return Err(CftError::ZeroConductor);
    }
    if m < 3 {
        return Err(CftError::DegenerateExtension(m));
    }
    Ok(GaloisGroup {
        m,
        elements: units_mod(m),
    })
}

/// A subgroup of (Z/mZ)^x, elements sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SubgroupData {
    pub m: u64,
    pub elements: Vec<u64>,
}

impl SubgroupData {
    /// Validates closure and membership.
    pub fn new(m: u64, elements: impl IntoIterator<Item = u64>) -> Result<Self> {
        if m == 0 {
            return Err(CftError::ZeroConductor);
        }
        let set: BTreeSet<u64> = elements.into_iter().map(|a| a % m).collect();
        let one = 1 % m;
        if !set.contains(&one) {
            return Err(CftError::InvalidSubgroup("missing identity".into()));
        }
        for &a in &set {
            if gcd(a, m) != 1 {
                return Err(CftError::InvalidSubgroup(format!("{a} is not a unit mod {m}")));
            }
            for &b in &set {
                if !set.contains(&(a * b % m)) {
                    return Err(CftError::InvalidSubgroup(format!(
                        "not closed: {a}*{b} mod {m}"
                    )));
                }
            }
        }
        Ok(SubgroupData {
            m,
            elements: set.into_iter().collect(),
        })
    }

    /// Subgroup generated by `gens` (empty list gives the trivial group).
    pub fn generated_by(m: u64, gens: &[u64]) -> Result<Self> {
        if m == 0 {
            return Err(CftError::ZeroConductor);
        }
        let mut set: BTreeSet<u64> = BTreeSet::from([1 % m]);
        for &g in gens {
            if gcd(g % m, m) != 1 {
                return Err(CftError::NotAUnit { a: g as i64, m });
            }
        }
        let mut frontier: Vec<u64> = set.iter().copied().collect();
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = x * (g % m) % m;
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Ok(SubgroupData {
            m,
            elements: set.into_iter().collect(),
        })
    }

    pub fn trivial(m: u64) -> Self {
        SubgroupData {
            m,
            elements: vec![1 % m],
        }
    }

    pub fn full(m: u64) -> Self {
        SubgroupData {
            m,
            elements: units_mod(m),
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, a: u64) -> bool {
        self.elements.binary_search(&(a % self.m)).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &SubgroupData) -> bool {
        self.m == other.m && self.elements.iter().all(|&a| other.contains(a))
    }

    fn join(&self, other: &SubgroupData) -> SubgroupData {
        let gens: Vec<u64> = self.elements.iter().chain(&other.elements).copied().collect();
        SubgroupData::generated_by(self.m, &gens).expect("units")
    }

    /// Coset representatives of `self / low`, smallest element of each coset.
    pub fn coset_reps(&self, low: &SubgroupData) -> Result<Vec<u64>> {
        if !low.is_subgroup_of(self) {
            return Err(CftError::InvalidSubgroup(
                "lower group is not contained in the upper group".into(),
            ));
        }
        let mut covered = BTreeSet::new();
        let mut reps = Vec::new();
        for &a in &self.elements {
            if covered.contains(&a) {
                continue;
            }
            reps.push(a);
            for &h in &low.elements {
                covered.insert(a * h % self.m);
            }
        }
        Ok(reps)
    }
}

/// All proper subgroups of (Z/mZ)^x, ordered by size then lexicographically.
/// Each one is the fixing group of an intermediate field properly containing Q.
pub fn subgroup_lattice(m: u64) -> Result<Vec<SubgroupData>> {
    let g = galois_group(m)?;
    let mut found: BTreeSet<SubgroupData> = g
        .elements
        .iter()
        .map(|&a| SubgroupData::generated_by(m, &[a]).expect("unit"))
        .collect();
    // every subgroup is a join of cyclic ones
    loop {
        let current: Vec<SubgroupData> = found.iter().cloned().collect();
        let mut grew = false;
        for (i, a) in current.iter().enumerate() {
            for b in &current[i + 1..] {
                if found.insert(a.join(b)) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut out: Vec<SubgroupData> = found
        .into_iter()
        .filter(|h| h.order() < g.order())
        .collect();
    out.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
    Ok(out)
}

fn check_conductor(x: &CycElem, h: &SubgroupData) -> Result<CycElem> {
    x.lift(h.m)
}

pub fn is_fixed_by(x: &CycElem, h: &SubgroupData) -> Result<bool> {
    let x = check_conductor(x, h)?;
    for &a in &h.elements {
        if a != 1 && x.apply(a as i64)? != x {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Tr_{U/Fix(H)}(x) = sum over a in H of x^{sigma_a}.
pub fn rel_trace(x: &CycElem, h: &SubgroupData) -> Result<CycElem> {
    let x = check_conductor(x, h)?;
    let mut acc = CycElem::zero(h.m);
    for &a in &h.elements {
        acc = &acc + &x.apply(a as i64)?;
    }
    debug_assert!(is_fixed_by(&acc, h).unwrap());
    Ok(acc)
}

/// N_{U/Fix(H)}(x) = product over a in H of x^{sigma_a}.
pub fn rel_norm(x: &CycElem, h: &SubgroupData) -> Result<CycElem> {
    let x = check_conductor(x, h)?;
    let mut acc = CycElem::one(h.m);
    for &a in &h.elements {
        acc = &acc * &x.apply(a as i64)?;
    }
    debug_assert!(is_fixed_by(&acc, h).unwrap());
    Ok(acc)
}

/// Tr_{Fix(low)/Fix(high)}(x) for x fixed by `low`.
pub fn trace_between(x: &CycElem, low: &SubgroupData, high: &SubgroupData) -> Result<CycElem> {
    let x = check_conductor(x, high)?;
    if !is_fixed_by(&x, low)? {
        return Err(CftError::NotInField);
    }
    let mut acc = CycElem::zero(high.m);
    for t in high.coset_reps(low)? {
        acc = &acc + &x.apply(t as i64)?;
    }
    Ok(acc)
}

/// N_{Fix(low)/Fix(high)}(x) for x fixed by `low`.
pub fn norm_between(x: &CycElem, low: &SubgroupData, high: &SubgroupData) -> Result<CycElem> {
    let x = check_conductor(x, high)?;
    if !is_fixed_by(&x, low)? {
        return Err(CftError::NotInField);
    }
    let mut acc = CycElem::one(high.m);
    for t in high.coset_reps(low)? {
        acc = &acc * &x.apply(t as i64)?;
    }
    Ok(acc)
}

/// Whether `x` (fixed by `low`) generates Fix(low) over Fix(high): its
/// stabilizer inside `high` must be exactly `low`.
pub fn generates(x: &CycElem, low: &SubgroupData, high: &SubgroupData) -> Result<bool> {
    if !low.is_subgroup_of(high) {
        return Err(CftError::InvalidSubgroup(
            "lower group is not contained in the upper group".into(),
        ));
    }
    let x = check_conductor(x, high)?;
    if !is_fixed_by(&x, low)? {
        return Err(CftError::NotInField);
    }
    for &a in &high.elements {
        if !low.contains(a) && x.apply(a as i64)? == x {
            return Ok(false);
        }
    }
    Ok(true)
}

/// |N_{L/Q}(disc(x, F/L))| with F = Fix(low), L = Fix(high).
pub fn rel_discriminant(x: &CycElem, low: &SubgroupData, high: &SubgroupData) -> Result<Rat> {
    if !generates(x, low, high)? {
        return Err(CftError::NotAGenerator);
    }
    let x = check_conductor(x, high)?;
    let conj: Vec<CycElem> = high
        .coset_reps(low)?
        .into_iter()
        .map(|t| x.apply(t as i64))
        .collect::<Result<_>>()?;
    let mut disc = CycElem::one(high.m);
    for i in 0..conj.len() {
        for j in i + 1..conj.len() {
            let d = &conj[i] - &conj[j];
            disc = &disc * &(&d * &d);
        }
    }
    let full = SubgroupData::full(high.m);
    let n = norm_between(&disc, high, &full)?;
    let q = n
        .as_rational()
        .ok_or_else(|| CftError::VerificationFailed("discriminant norm not rational".into()))?;
    Ok(q.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::elem::cyc_reduce;

    fn sg(m: u64, e: &[u64]) -> SubgroupData {
        SubgroupData::new(m, e.iter().copied()).unwrap()
    }

    fn period(m: u64, h: &[u64]) -> CycElem {
        cyc_reduce(m, h.iter().map(|&a| (a as i64, Rat::from(1)))).unwrap()
    }

    #[test]
    fn groups() {
        assert_eq!(galois_group(5).unwrap().elements, vec![1, 2, 3, 4]);
        assert_eq!(galois_group(12).unwrap().elements, vec![1, 5, 7, 11]);
        assert_eq!(galois_group(9).unwrap().order(), 6);
        assert_eq!(galois_group(2).unwrap_err(), CftError::DegenerateExtension(2));
    }

    #[test]
    fn lattices() {
        let l5 = subgroup_lattice(5).unwrap();
        assert_eq!(l5, vec![sg(5, &[1]), sg(5, &[1, 4])]);
        let l12 = subgroup_lattice(12).unwrap();
        assert_eq!(l12.len(), 4);
        assert_eq!(l12[3], sg(12, &[1, 11]));
        assert_eq!(subgroup_lattice(4).unwrap(), vec![sg(4, &[1])]);
    }

    #[test]
    fn bad_subgroups() {
        assert!(SubgroupData::new(5, [1, 2]).is_err());
        assert!(SubgroupData::new(6, [1, 2]).is_err());
        assert!(SubgroupData::new(5, [4]).is_err());
    }

    #[test]
    fn trace_and_norm_examples() {
        let z5 = CycElem::zeta(5);
        assert_eq!(rel_trace(&z5, &SubgroupData::full(5)).unwrap(), CycElem::from_int(5, -1));
        assert_eq!(rel_norm(&CycElem::zeta(3), &sg(3, &[1, 2])).unwrap(), CycElem::one(3));
        assert_eq!(rel_trace(&z5, &sg(5, &[1, 4])).unwrap(), period(5, &[1, 4]));
    }

    #[test]
    fn generates_examples() {
        let full = SubgroupData::full(5);
        let triv = SubgroupData::trivial(5);
        let p = period(5, &[1, 4]);
        assert!(generates(&CycElem::zeta(5), &triv, &full).unwrap());
        assert!(!generates(&p, &triv, &full).unwrap());
        assert!(generates(&p, &sg(5, &[1, 4]), &full).unwrap());
        assert_eq!(
            generates(&CycElem::zeta(5), &sg(5, &[1, 4]), &full).unwrap_err(),
            CftError::NotInField
        );
    }

    #[test]
    fn discriminant_examples() {
        let full = SubgroupData::full(5);
        let sqrt5 = &period(5, &[1, 4]).scale(&Rat::from(2)) + &CycElem::one(5);
        assert_eq!(rel_discriminant(&sqrt5, &sg(5, &[1, 4]), &full).unwrap(), 20);
        assert_eq!(
            rel_discriminant(&CycElem::zeta(5), &SubgroupData::trivial(5), &full).unwrap(),
            125
        );
        assert_eq!(
            rel_discriminant(&CycElem::zeta(3), &SubgroupData::trivial(3), &SubgroupData::full(3))
                .unwrap(),
            3
        );
        assert_eq!(
            rel_discriminant(&period(5, &[1, 4]), &SubgroupData::trivial(5), &full).unwrap_err(),
            CftError::NotAGenerator
        );
    }

    #[test]
    fn cosets() {
        let reps = SubgroupData::full(12).coset_reps(&sg(12, &[1, 5])).unwrap();
        assert_eq!(reps, vec![1, 7]);
    }
}
