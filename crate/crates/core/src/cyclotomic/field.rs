use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::arith::euler_phi;

/// Reduction data for Q(zeta_m): the cyclotomic polynomial and the
/// power-basis images of zeta_m^k for every residue k mod m.
#[derive(Debug)]
pub struct CycField {
    m: u64,
    phi: usize,
    /// Coefficients of Phi_m, lowest degree first (monic).
    modulus: Vec<i64>,
    /// `powers[k]` = zeta_m^k written in the basis 1, zeta, ..., zeta^(phi-1).
    powers: Vec<Vec<i64>>,
}

fn cache() -> &'static RwLock<HashMap<u64, Arc<CycField>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<CycField>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Exact division of integer polynomials (divisor monic).
fn div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem: Vec<i128> = num.iter().map(|&c| c as i128).collect();
    let dd = den.len() - 1;
    debug_assert_eq!(*den.last().unwrap(), 1);
    let mut quo = vec![0i128; rem.len() - dd];
    for i in (0..quo.len()).rev() {
        let c = rem[i + dd];
        quo[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj as i128;
            }
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quo.into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient overflow"))
        .collect()
}

/// Phi_m via X^m - 1 = prod_{d | m} Phi_d.
pub fn cyclotomic_poly(m: u64) -> Vec<i64> {
    assert!(m >= 1);
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            num = div_exact(&num, &CycField::get(d).modulus);
        }
    }
    num
}

impl CycField {
    /// Shared reduction data for conductor `m`; built once per conductor.
    pub fn get(m: u64) -> Arc<CycField> {
        assert!(m >= 1, "conductor must be positive");
        if let Some(f) = cache().read().unwrap().get(&m) {
            return f.clone();
        }
        let field = Arc::new(CycField::build(m));
        cache()
            .write()
            .unwrap()
            .entry(m)
            .or_insert(field)
            .clone()
    }

    fn build(m: u64) -> CycField {
        let modulus = cyclotomic_poly(m);
        let phi = euler_phi(m) as usize;
        debug_assert_eq!(modulus.len(), phi + 1);
        let mut powers = Vec::with_capacity(m as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..m {
            powers.push(cur.clone());
            // multiply by zeta and reduce with the monic modulus
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..phi {
                    cur[i] -= top * modulus[i];
                }
            }
        }
        CycField {
            m,
            phi,
            modulus,
            powers,
        }
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    /// zeta_m^k for any integer k.
    pub fn power(&self, k: i64) -> &[i64] {
        &self.powers[k.rem_euclid(self.m as i64) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
    }

    #[test]
    fn phi_105_has_a_two() {
        assert!(cyclotomic_poly(105).contains(&-2));
    }

    #[test]
    fn power_table_wraps() {
        let f = CycField::get(3);
        assert_eq!(f.power(2), &[-1, -1]);
        assert_eq!(f.power(3), &[1, 0]);
        assert_eq!(f.power(-1), &[-1, -1]);
    }
}
