//! Character groups of small finite abelian groups given by a
//! multiplication table. Character values are stored as exponents k of
//! zeta_e (e the group exponent), so chi(g) = exp(2 pi i k / e).

use serde::Serialize;

use crate::arith::lcm;

/// A finite abelian group on 0..n with 0 the identity.
#[derive(Clone, Debug)]
pub struct FiniteAbelian {
    mul: Vec<Vec<usize>>,
}

impl FiniteAbelian {
    /// `op(i, j)` must return the index of element_i * element_j.
    pub fn from_op(n: usize, op: impl Fn(usize, usize) -> usize) -> Self {
        let mul: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| op(i, j)).collect()).collect();
        for (i, row) in mul.iter().enumerate() {
            assert_eq!(row[0], i, "index 0 must be the identity");
            for (j, &k) in row.iter().enumerate() {
                assert!(k < n, "product out of range");
                assert_eq!(mul[j][i], k, "group must be abelian");
            }
        }
        FiniteAbelian { mul }
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order())
            .find(|&b| self.mul[a][b] == 0)
            .expect("every element has an inverse")
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul[x][a];
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u64 {
        (0..self.order()).fold(1, |e, a| lcm(e, self.element_order(a)))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterTable {
    /// Values live in mu_exponent.
    pub exponent: u64,
    /// `values[i][g]` = k with chi_i(g) = zeta_exponent^k; chi_0 is trivial.
    pub values: Vec<Vec<u64>>,
}

impl CharacterTable {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// The full dual group, built by extending characters one generator at
/// a time (generators picked as the smallest index outside the span).
pub fn character_table(g: &FiniteAbelian) -> CharacterTable {
    let n = g.order();
    let e = g.exponent();
    // span membership and the characters restricted to the span
    let mut in_span = vec![false; n];
    in_span[0] = true;
    let mut span = vec![0usize];
    let mut chars: Vec<Vec<Option<u64>>> = vec![{
        let mut v = vec![None; n];
        v[0] = Some(0);
        v
    }];
    while let Some(gen) = (0..n).find(|&a| !in_span[a]) {
        // smallest t > 0 with gen^t in the span
        let mut powers = vec![0usize, gen];
        while !in_span[*powers.last().unwrap()] {
            let next = g.mul(*powers.last().unwrap(), gen);
            powers.push(next);
        }
        let t = powers.len() as u64 - 1;
        let gt = powers[t as usize];
        let mut new_span = Vec::with_capacity(span.len() * t as usize);
        for &p in &powers[..t as usize] {
            for &h in &span {
                new_span.push(g.mul(p, h));
            }
        }
        let mut new_chars = Vec::with_capacity(chars.len() * t as usize);
        for j in 0..t {
            for chi in &chars {
                let k = chi[gt].expect("defined on span");
                debug_assert_eq!(k % t, 0);
                let x = (k / t + j * (e / t)) % e;
                let mut ext = vec![None; n];
                for (i, &p) in powers[..t as usize].iter().enumerate() {
                    for &h in &span {
                        let val = (i as u64 * x + chi[h].unwrap()) % e;
                        ext[g.mul(p, h)] = Some(val);
                    }
                }
                new_chars.push(ext);
            }
        }
        for &a in &new_span {
            in_span[a] = true;
        }
        span = new_span;
        chars = new_chars;
    }
    CharacterTable {
        exponent: e,
        values: chars
            .into_iter()
            .map(|c| c.into_iter().map(|v| v.unwrap()).collect())
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> FiniteAbelian {
        FiniteAbelian::from_op(n, |a, b| (a + b) % n)
    }

    fn check_homomorphisms(g: &FiniteAbelian, t: &CharacterTable) {
        for chi in &t.values {
            for a in 0..g.order() {
                for b in 0..g.order() {
                    assert_eq!((chi[a] + chi[b]) % t.exponent, chi[g.mul(a, b)]);
                }
            }
        }
    }

    #[test]
    fn cyclic_groups() {
        let g = cyclic(6);
        let t = character_table(&g);
        assert_eq!(t.len(), 6);
        assert_eq!(t.exponent, 6);
        assert!(t.values[0].iter().all(|&v| v == 0));
        check_homomorphisms(&g, &t);
    }

    #[test]
    fn klein_four() {
        let g = FiniteAbelian::from_op(4, |a, b| a ^ b);
        let t = character_table(&g);
        assert_eq!(t.exponent, 2);
        assert_eq!(t.len(), 4);
        check_homomorphisms(&g, &t);
        let mut distinct = t.values.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), 4);
    }

    #[test]
    fn product_group() {
        // Z/2 x Z/4
        let g = FiniteAbelian::from_op(8, |a, b| ((a / 4 + b / 4) % 2) * 4 + (a % 4 + b % 4) % 4);
        let t = character_table(&g);
        assert_eq!(t.exponent, 4);
        assert_eq!(t.len(), 8);
        check_homomorphisms(&g, &t);
    }
}
