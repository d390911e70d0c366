use cft_core::arith::{euler_phi, units_mod};
use cft_core::coprime::coprime_seq;
use cft_core::cyclotomic::{
    cyc_reduce, galois_group, subgroup_lattice, trace_between, CycElem, Rat, SubgroupData,
};
use cft_core::normal_elem::{is_normal, is_normal_by_rank};
use proptest::prelude::*;
use rug::ops::Pow;
use rug::Integer;

const CONDUCTORS: [u64; 9] = [3, 4, 5, 7, 8, 9, 12, 15, 16];

fn elem(m: u64, raw: &[(i64, i64, i64)]) -> CycElem {
    cyc_reduce(m, raw.iter().map(|&(k, p, q)| (k, Rat::from((p, q.max(1)))))).unwrap()
}

fn raw_terms() -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    prop::collection::vec((-40i64..40, -20i64..20, 1i64..6), 0..8)
}

/// Evaluates at zeta_m = e^{2 pi i / m} in double precision.
fn eval_raw(m: u64, raw: &[(i64, i64, i64)]) -> (f64, f64) {
    raw.iter().fold((0.0, 0.0), |(re, im), &(k, p, q)| {
        let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
        let c = p as f64 / q.max(1) as f64;
        (re + c * t.cos(), im + c * t.sin())
    })
}

fn eval_elem(x: &CycElem) -> (f64, f64) {
    let m = x.conductor();
    x.coeffs().iter().enumerate().fold((0.0, 0.0), |(re, im), (k, c)| {
        let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
        let c = c.to_f64();
        (re + c * t.cos(), im + c * t.sin())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_matches_complex_evaluation(mi in 0usize..CONDUCTORS.len(), raw in raw_terms()) {
        let m = CONDUCTORS[mi];
        let x = elem(m, &raw);
        let (a, b) = (eval_raw(m, &raw), eval_elem(&x));
        prop_assert!((a.0 - b.0).abs() < 1e-7 && (a.1 - b.1).abs() < 1e-7);
        // reducing a reduced element changes nothing
        let again = cyc_reduce(m, x.coeffs().iter().enumerate().map(|(k, c)| (k as i64, c.clone()))).unwrap();
        prop_assert_eq!(again, x);
    }

    #[test]
    fn field_axioms(mi in 0usize..CONDUCTORS.len(), a in raw_terms(), b in raw_terms(), c in raw_terms()) {
        let m = CONDUCTORS[mi];
        let (x, y, z) = (elem(m, &a), elem(m, &b), elem(m, &c));
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x - &x, CycElem::zero(m));
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inv().unwrap(), CycElem::one(m));
        }
    }

    #[test]
    fn automorphisms_are_ring_maps(mi in 0usize..CONDUCTORS.len(), a in raw_terms(), b in raw_terms(), k in 0usize..8) {
        let m = CONDUCTORS[mi];
        let units = units_mod(m);
        let s = units[k % units.len()] as i64;
        let (x, y) = (elem(m, &a), elem(m, &b));
        prop_assert_eq!((&x * &y).apply(s).unwrap(), &x.apply(s).unwrap() * &y.apply(s).unwrap());
        prop_assert_eq!((&x + &y).apply(s).unwrap(), &x.apply(s).unwrap() + &y.apply(s).unwrap());
        let t = units[(k + 1) % units.len()] as i64;
        let st = (s * t).rem_euclid(m as i64);
        prop_assert_eq!(x.apply(t).unwrap().apply(s).unwrap(), x.apply(st).unwrap());
    }

    #[test]
    fn trace_is_transitive(mi in 0usize..CONDUCTORS.len(), a in raw_terms(), pick in 0usize..64) {
        let m = CONDUCTORS[mi];
        let x = elem(m, &a);
        let lattice = subgroup_lattice(m).unwrap();
        let mid = &lattice[pick % lattice.len()];
        let triv = SubgroupData::trivial(m);
        let full = SubgroupData::full(m);
        let via = trace_between(&trace_between(&x, &triv, mid).unwrap(), mid, &full).unwrap();
        prop_assert_eq!(via.as_rational().unwrap(), x.trace_to_q());
    }

    #[test]
    fn coprime_sequence(inputs in prop::collection::vec(0u64..100_000, 1..10)) {
        let ns: Vec<Integer> = inputs.iter().map(|&n| Integer::from(n)).collect();
        let seq = coprime_seq(&ns).unwrap();
        for (i, m) in seq.outputs.iter().enumerate() {
            prop_assert!(*m > ns[i]);
            prop_assert_eq!(Integer::from(m.gcd_ref(&ns[i])), 1);
            for other in &seq.outputs[i + 1..] {
                prop_assert_eq!(Integer::from(m.gcd_ref(other)), 1);
            }
        }
    }

    #[test]
    fn normality_oracles_agree(mi in 0usize..5, coords in prop::collection::vec(-2i64..=2, 8)) {
        let m = [3u64, 4, 5, 8, 12][mi];
        let d = euler_phi(m) as usize;
        let u = cyc_reduce(m, coords[..d].iter().enumerate().map(|(k, &c)| (k as i64, Rat::from(c)))).unwrap();
        prop_assert_eq!(is_normal(&u, m).unwrap(), is_normal_by_rank(&u, m).unwrap());
    }
}

/// All subsets of the unit group closed under multiplication.
fn brute_force_subgroups(m: u64) -> Vec<Vec<u64>> {
    let units = units_mod(m);
    let n = units.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let set: Vec<u64> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| units[i]).collect();
        if !set.contains(&1) {
            continue;
        }
        let closed = set.iter().all(|&a| set.iter().all(|&b| set.contains(&(a * b % m))));
        if closed {
            out.push(set);
        }
    }
    out.sort();
    out
}

#[test]
fn subgroup_lattice_matches_brute_force() {
    for m in [5u64, 7, 8, 9, 12, 13, 15, 16, 20, 21, 24] {
        let mut ours: Vec<Vec<u64>> = subgroup_lattice(m).unwrap().into_iter().map(|h| h.elements).collect();
        ours.push(galois_group(m).unwrap().as_subgroup().elements);
        ours.sort();
        assert_eq!(ours, brute_force_subgroups(m), "m = {m}");
    }
}

#[test]
fn charpoly_of_zeta_is_cyclotomic() {
    use cft_core::cyclotomic::cyclotomic_poly;
    for m in [3u64, 5, 8, 9, 12, 15, 16, 21] {
        let cp = CycElem::zeta(m).charpoly();
        let expect: Vec<Rat> = cyclotomic_poly(m).into_iter().map(Rat::from).collect();
        assert_eq!(cp, expect, "m = {m}");
    }
}

#[test]
fn discriminant_of_prime_cyclotomic() {
    use cft_core::cyclotomic::rel_discriminant;
    // |disc(Phi_p)| = p^(p-2)
    for p in [3u64, 5, 7, 11, 13] {
        let disc = rel_discriminant(&CycElem::zeta(p), &SubgroupData::trivial(p), &SubgroupData::full(p)).unwrap();
        assert_eq!(disc, Rat::from(Integer::from(p).pow((p - 2) as u32)), "p = {p}");
    }
}
