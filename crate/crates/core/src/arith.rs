//! Small integer helpers shared by the exact and CM layers.

use rug::Integer;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

pub fn gcd_i64(a: i64, b: i64) -> u64 {
    gcd(a.unsigned_abs(), b.unsigned_abs())
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [n]
}

/// Units of Z/mZ in ascending order (so 1 comes first).
pub fn units_mod(m: u64) -> Vec<u64> {
    if m == 1 {
        return vec![0];
    }
    (1..m).filter(|&a| gcd(a, m) == 1).collect()
}

pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Product of the distinct primes dividing `n` (radical). `rad(1) = 1`.
pub fn radical(n: &Integer) -> Integer {
    assert!(*n > 0, "radical of a non-positive integer");
    let mut n = n.clone();
    let mut rad = Integer::from(1);
    let mut p = Integer::from(2);
    while Integer::from(&p * &p) <= n {
        if n.is_divisible(&p) {
            rad *= &p;
            while n.is_divisible(&p) {
                n /= &p;
            }
        }
        p += 1;
    }
    if n > 1 {
        rad *= n;
    }
    rad
}

/// Kronecker symbol (d / p) for an odd prime `p` or `p = 2`.
pub fn kronecker(d: i64, p: u64) -> i32 {
    if p == 2 {
        if d % 2 == 0 {
            return 0;
        }
        return match d.rem_euclid(8) {
            1 | 7 => 1,
            _ => -1,
        };
    }
    let a = d.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    let mut r = 1u128;
    let mut base = a as u128;
    let mut e = (p - 1) / 2;
    let pm = p as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % pm;
        }
        base = base * base % pm;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totient_and_units() {
        assert_eq!(euler_phi(12), 4);
        assert_eq!(units_mod(12), vec![1, 5, 7, 11]);
        assert_eq!(units_mod(9), vec![1, 2, 4, 5, 7, 8]);
        assert_eq!(euler_phi(1), 1);
    }

    #[test]
    fn radicals() {
        assert_eq!(radical(&Integer::from(10000)), 10);
        assert_eq!(radical(&Integer::from(8)), 2);
        assert_eq!(radical(&Integer::from(6)), 6);
        assert_eq!(radical(&Integer::from(1)), 1);
    }

    #[test]
    fn kronecker_small() {
        assert_eq!(kronecker(-7, 3), -1);
        assert_eq!(kronecker(-7, 11), 1);
        assert_eq!(kronecker(-7, 7), 0);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-11, 2), -1);
    }

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(2, 4), None);
    }
}
