//! Normal elements for Q(zeta_m)/Q from character sums.
//!
//! S(chi, k) = sum_j chi(g_j^{-1}) alpha_j^k with alpha_j = alpha^{g_j};
//! N(chi, k) = |N_{Q(zeta_lcm(m,d))/Q}(S(chi, k))|. The d^2 norms (row
//! major: k outer, chi inner) feed the coprime recursion, and
//! beta = sum_k (sum_i 1/M(chi_i, k)) alpha^k is normal.

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::abelian::{character_table, CharacterTable, FiniteAbelian};
use crate::arith::{lcm, units_mod};
use crate::coprime::coprime_seq;
use crate::cyclotomic::{galois_group, generates, CycElem, SubgroupData};
use crate::error::{CftError, Result};

/// Default digit bound past which a certificate carries a size warning.
pub const DEFAULT_M_DIGIT_WARNING: usize = 10_000;

/// The dual of (Z/mZ)^x. Values of chi are powers of zeta_d, d = phi(m),
/// embedded in Q(zeta_lcm(m, d)).
#[derive(Clone, Debug, Serialize)]
pub struct AbelianCharTable {
    pub m: u64,
    /// Group elements g_1 = 1, g_2, ... (ascending).
    pub elements: Vec<u64>,
    pub order: u64,
    pub table: CharacterTable,
}

impl AbelianCharTable {
    /// Conductor of the field holding alpha and the character values.
    pub fn value_conductor(&self) -> u64 {
        lcm(self.m, self.order)
    }

    /// chi_i(g_j^s) for s = +1 or -1, as an element of Q(zeta_lcm(m, d)).
    pub fn value(&self, i: usize, j: usize, inverse: bool) -> CycElem {
        let e = self.table.exponent;
        let mut k = self.table.values[i][j] % e;
        if inverse {
            k = (e - k) % e;
        }
        let step = self.order / e;
        CycElem::zeta_pow(self.order, (k * step) as i64)
            .lift(self.value_conductor())
            .expect("d divides lcm(m, d)")
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

pub fn char_table(m: u64) -> Result<AbelianCharTable> {
    let g = galois_group(m)?;
    let elements = g.elements.clone();
    let index = |a: u64| elements.binary_search(&a).expect("closed");
    let group = FiniteAbelian::from_op(elements.len(), |i, j| index(elements[i] * elements[j] % m));
    Ok(AbelianCharTable {
        m,
        order: elements.len() as u64,
        table: character_table(&group),
        elements,
    })
}

fn check_generator(alpha: &CycElem, m: u64) -> Result<CycElem> {
    let a = alpha.lift(m)?;
    if !a.is_algebraic_integer() {
        return Err(CftError::NotAlgebraicInteger);
    }
    if !generates(&a, &SubgroupData::trivial(m), &SubgroupData::full(m))? {
        return Err(CftError::NotAGenerator);
    }
    Ok(a)
}

/// alpha_j^k for j over group elements, k = 0..d-1, lifted to lcm(m, d).
fn conjugate_powers(alpha: &CycElem, t: &AbelianCharTable) -> Result<Vec<Vec<CycElem>>> {
    let big = t.value_conductor();
    t.elements
        .iter()
        .map(|&g| {
            let aj = alpha.apply(g as i64)?.lift(big)?;
            let mut pows = Vec::with_capacity(t.order as usize);
            let mut cur = CycElem::one(big);
            for _ in 0..t.order {
                pows.push(cur.clone());
                cur = &cur * &aj;
            }
            Ok(pows)
        })
        .collect()
}

fn char_sum_from(pows: &[Vec<CycElem>], t: &AbelianCharTable, chi: usize, k: usize) -> CycElem {
    let mut acc = CycElem::zero(t.value_conductor());
    for (j, row) in pows.iter().enumerate() {
        acc = &acc + &(&t.value(chi, j, true) * &row[k]);
    }
    acc
}

/// S(chi, k) for an integral generator alpha of Q(zeta_m).
pub fn char_sum_s(alpha: &CycElem, t: &AbelianCharTable, chi: usize, k: usize) -> Result<CycElem> {
    if k >= t.order as usize || chi >= t.len() {
        return Err(CftError::InvalidArgument(format!(
            "need chi < {} and 0 <= k < {}",
            t.len(),
            t.order
        )));
    }
    let a = check_generator(alpha, t.m)?;
    let pows = conjugate_powers(&a, t)?;
    let s = char_sum_from(&pows, t, chi, k);
    debug_assert!(s.is_algebraic_integer());
    Ok(s)
}

/// For each character, the smallest k with S(chi, k) != 0.
pub fn sums_nonvanishing_check(alpha: &CycElem, m: u64) -> Result<Vec<usize>> {
    let t = char_table(m)?;
    let a = check_generator(alpha, m)?;
    let pows = conjugate_powers(&a, &t)?;
    (0..t.len())
        .map(|chi| {
            (0..t.order as usize)
                .find(|&k| !char_sum_from(&pows, &t, chi, k).is_zero())
                .ok_or_else(|| {
                    CftError::VerificationFailed(format!(
                        "all character sums vanish for chi_{}",
                        chi + 1
                    ))
                })
        })
        .collect()
}

/// sum_j chi(g_j^{-1}) u^{g_j} for every character.
pub fn frobenius_sums(u: &CycElem, t: &AbelianCharTable) -> Result<Vec<CycElem>> {
    let u = u.lift(t.m)?;
    let big = t.value_conductor();
    let conj: Vec<CycElem> = t
        .elements
        .iter()
        .map(|&g| u.apply(g as i64)?.lift(big))
        .collect::<Result<_>>()?;
    Ok((0..t.len())
        .map(|chi| {
            conj.iter()
                .enumerate()
                .fold(CycElem::zero(big), |acc, (j, c)| &acc + &(&t.value(chi, j, true) * c))
        })
        .collect())
}

/// Normality via the character criterion: no Frobenius sum vanishes.
pub fn is_normal(u: &CycElem, m: u64) -> Result<bool> {
    let t = char_table(m)?;
    Ok(frobenius_sums(u, &t)?.iter().all(|s| !s.is_zero()))
}

/// Rank of the d x d matrix of power-basis coordinates of the conjugates.
pub fn conjugate_rank(u: &CycElem, m: u64) -> Result<usize> {
    let u = u.lift(m)?;
    let mut rows: Vec<Vec<Rational>> = units_mod(m)
        .into_iter()
        .map(|a| Ok(u.apply(a as i64)?.coeffs().to_vec()))
        .collect::<Result<_>>()?;
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = Rational::from(&rows[r][col] / &pivot);
                for c in col..ncols {
                    let delta = Rational::from(&f * &rows[rank][c]);
                    rows[r][c] -= delta;
                }
            }
        }
        rank += 1;
    }
    Ok(rank)
}

/// Normality from the definition: the conjugates are linearly independent.
pub fn is_normal_by_rank(u: &CycElem, m: u64) -> Result<bool> {
    Ok(conjugate_rank(u, m)? == units_mod(m).len())
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalElemCertificate {
    pub m: u64,
    pub d: u64,
    pub alpha: CycElem,
    pub characters: AbelianCharTable,
    /// S(chi_i, k) in row-major order (k outer, chi inner).
    pub char_sums: Vec<CycElem>,
    #[serde(serialize_with = "crate::report::ser_ints")]
    pub norms: Vec<Integer>,
    #[serde(serialize_with = "crate::report::ser_ints")]
    pub denominators: Vec<Integer>,
    /// Coefficient of alpha^k in beta.
    #[serde(serialize_with = "crate::report::ser_rats")]
    pub coefficients: Vec<Rational>,
    pub beta: CycElem,
    /// Smallest k with S(chi, k) != 0, per character.
    pub first_nonvanishing: Vec<usize>,
    pub normal_by_characters: bool,
    pub normal_by_rank: bool,
    pub ordering: &'static str,
    pub max_denominator_digits: usize,
    pub warnings: Vec<String>,
}

impl NormalElemCertificate {
    pub fn all_passed(&self) -> bool {
        self.normal_by_characters && self.normal_by_rank
    }

    pub fn check(&self) -> Result<()> {
        if self.all_passed() {
            Ok(())
        } else {
            Err(CftError::VerificationFailed(format!(
                "beta is not normal for conductor {} (characters: {}, rank: {})",
                self.m, self.normal_by_characters, self.normal_by_rank
            )))
        }
    }
}

pub fn construct_normal_element(
    alpha: &CycElem,
    m: u64,
    digit_warning: usize,
) -> Result<NormalElemCertificate> {
    let t = char_table(m)?;
    let a = check_generator(alpha, m)?;
    let d = t.order as usize;
    let pows = conjugate_powers(&a, &t)?;
    // Vandermonde: conjugates pairwise distinct
    for i in 0..d {
        for j in i + 1..d {
            if pows[i][1] == pows[j][1] {
                return Err(CftError::VerificationFailed("repeated conjugate".into()));
            }
        }
    }
    let idx: Vec<(usize, usize)> = (0..d).flat_map(|k| (0..d).map(move |chi| (k, chi))).collect();
    let char_sums: Vec<CycElem> = idx
        .par_iter()
        .map(|&(k, chi)| char_sum_from(&pows, &t, chi, k))
        .collect();
    let norms: Vec<Integer> = char_sums
        .par_iter()
        .map(|s| {
            let n = s.norm_to_q().abs();
            if *n.denom() != 1 {
                return Err(CftError::NotAlgebraicInteger);
            }
            Ok(n.numer().clone())
        })
        .collect::<Result<_>>()?;
    let first_nonvanishing = (0..d)
        .map(|chi| {
            (0..d).find(|&k| !char_sums[k * d + chi].is_zero()).ok_or_else(|| {
                CftError::VerificationFailed(format!("all S(chi_{}, k) vanish", chi + 1))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let seq = coprime_seq(&norms)?;
    let coefficients: Vec<Rational> = (0..d)
        .map(|k| {
            seq.outputs[k * d..(k + 1) * d]
                .iter()
                .fold(Rational::new(), |acc, mi| acc + Rational::from((1, mi.clone())))
        })
        .collect();
    let mut beta = CycElem::zero(m);
    let mut power = CycElem::one(m);
    for c in &coefficients {
        beta = &beta + &power.scale(c);
        power = &power * &a;
    }
    let max_denominator_digits = seq
        .outputs
        .iter()
        .map(|x| x.to_string().len())
        .max()
        .unwrap_or(0);
    let mut warnings = Vec::new();
    if max_denominator_digits > digit_warning {
        warnings.push(format!(
            "largest denominator has {max_denominator_digits} digits (bound {digit_warning})"
        ));
    }
    let normal_by_characters = frobenius_sums(&beta, &t)?.iter().all(|s| !s.is_zero());
    let normal_by_rank = is_normal_by_rank(&beta, m)?;
    Ok(NormalElemCertificate {
        m,
        d: t.order,
        alpha: a,
        characters: t,
        char_sums,
        norms,
        denominators: seq.outputs,
        coefficients,
        beta,
        first_nonvanishing,
        normal_by_characters,
        normal_by_rank,
        ordering: "row-major: (chi_1,0), ..., (chi_d,0), (chi_1,1), ..., (chi_d,d-1)",
        max_denominator_digits,
        warnings,
    })
}

pub fn build_normal_element(alpha: &CycElem, m: u64) -> Result<NormalElemCertificate> {
    let cert = construct_normal_element(alpha, m, DEFAULT_M_DIGIT_WARNING)?;
    cert.check()?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::{cyc_reduce, Rat};

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn tables() {
        let t3 = char_table(3).unwrap();
        assert_eq!(t3.len(), 2);
        assert_eq!(t3.value(1, 1, false), CycElem::from_int(6, -1));
        let t5 = char_table(5).unwrap();
        assert_eq!(t5.len(), 4);
        // chi_2(2) = i
        assert_eq!(t5.elements[1], 2);
        assert_eq!(t5.value(1, 1, false), CycElem::zeta(4).lift(20).unwrap());
        let t8 = char_table(8).unwrap();
        assert_eq!(t8.table.exponent, 2);
        for i in 0..4 {
            for j in 0..4 {
                let v = t8.value(i, j, false);
                assert!(v == CycElem::from_int(8, 1) || v == CycElem::from_int(8, -1));
            }
        }
    }

    #[test]
    fn orthogonality() {
        for m in [5u64, 8, 9, 12, 15] {
            let t = char_table(m).unwrap();
            let d = t.order as i64;
            for i in 0..t.len() {
                for j in 0..t.len() {
                    let s = (0..t.len()).fold(CycElem::zero(t.value_conductor()), |acc, g| {
                        &acc + &(&t.value(i, g, false) * &t.value(j, g, true))
                    });
                    let expect = if i == j { d } else { 0 };
                    assert_eq!(s, CycElem::from_int(t.value_conductor(), expect), "m={m}");
                }
            }
        }
    }

    #[test]
    fn char_sums_m3() {
        let t = char_table(3).unwrap();
        let z = CycElem::zeta(3);
        assert_eq!(char_sum_s(&z, &t, 0, 0).unwrap(), CycElem::from_int(6, 2));
        assert!(char_sum_s(&z, &t, 1, 0).unwrap().is_zero());
        let sqrt_m3 = &z - &CycElem::zeta_pow(3, 2);
        assert_eq!(char_sum_s(&z, &t, 1, 1).unwrap(), sqrt_m3);
        assert_eq!(char_sum_s(&z, &t, 0, 1).unwrap(), CycElem::from_int(3, -1));
    }

    #[test]
    fn nonvanishing_examples() {
        assert_eq!(sums_nonvanishing_check(&CycElem::zeta(3), 3).unwrap(), vec![0, 1]);
        assert!(sums_nonvanishing_check(&CycElem::zeta(5), 5).unwrap().iter().all(|&k| k <= 3));
        assert!(sums_nonvanishing_check(&CycElem::zeta(4), 4).unwrap().iter().all(|&k| k <= 1));
    }

    #[test]
    fn normality_examples() {
        let z = CycElem::zeta(3);
        assert!(is_normal(&z, 3).unwrap());
        let sqrt_m3 = &z - &CycElem::zeta_pow(3, 2);
        assert!(!is_normal(&sqrt_m3, 3).unwrap());
        assert!(!is_normal_by_rank(&sqrt_m3, 3).unwrap());
        assert!(!is_normal(&CycElem::one(5), 5).unwrap());
        assert_eq!(conjugate_rank(&CycElem::one(5), 5).unwrap(), 1);
    }

    #[test]
    fn worked_certificate_m3() {
        let cert = build_normal_element(&CycElem::zeta(3), 3).unwrap();
        assert_eq!(cert.norms, ints(&[4, 0, 1, 3]));
        assert_eq!(cert.denominators, ints(&[5, 1, 6, 91]));
        let beta = cyc_reduce(3, [(0, Rat::from((6, 5))), (1, Rat::from((97, 546)))]).unwrap();
        assert_eq!(cert.beta, beta);
        assert!(cert.all_passed());
    }

    #[test]
    fn certificates_small_conductors() {
        for m in [4u64, 5, 8, 12] {
            let cert = build_normal_element(&CycElem::zeta(m), m).unwrap();
            assert_eq!(cert.norms.len() as u64, cert.d * cert.d);
            assert!(cert.all_passed());
        }
    }

    #[test]
    fn size_guard_m5() {
        let cert = construct_normal_element(&CycElem::zeta(5), 5, DEFAULT_M_DIGIT_WARNING).unwrap();
        assert_eq!(cert.warnings.len(), 1);
        let cert = construct_normal_element(&CycElem::zeta(5), 5, 20_000).unwrap();
        assert!(cert.warnings.is_empty());
    }

    #[test]
    fn rejects_non_generators() {
        let p = cyc_reduce(5, [(1, Rat::from(1)), (4, Rat::from(1))]).unwrap();
        assert_eq!(build_normal_element(&p, 5).unwrap_err(), CftError::NotAGenerator);
    }
}
