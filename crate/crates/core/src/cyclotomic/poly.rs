//! Dense polynomials over Q, used for inversion modulo Phi_m.

use rug::Rational;

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct QPoly(pub Vec<Rational>);

impl QPoly {
    pub fn from_ints(c: &[i64]) -> Self {
        let mut p = QPoly(c.iter().map(|&x| Rational::from(x)).collect());
        p.trim();
        p
    }

    pub fn trim(&mut self) {
        while self.0.last().is_some_and(|c| *c == 0) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut c = self.0.get(i).cloned().unwrap_or_default();
            if let Some(o) = other.0.get(i) {
                c -= o;
            }
            out.push(c);
        }
        let mut p = QPoly(out);
        p.trim();
        p
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly(Vec::new());
        }
        let mut out = vec![Rational::new(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        let mut p = QPoly(out);
        p.trim();
        p
    }

    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead = d.0[dd].clone();
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (QPoly(Vec::new()), self.clone());
        }
        let mut quo = vec![Rational::new(); rem.len() - dd];
        for i in (0..quo.len()).rev() {
            let c = Rational::from(&rem[i + dd] / &lead);
            if c != 0 {
                for (j, dj) in d.0.iter().enumerate() {
                    rem[i + j] -= Rational::from(&c * dj);
                }
            }
            quo[i] = c;
        }
        let mut q = QPoly(quo);
        q.trim();
        let mut r = QPoly(rem);
        r.trim();
        (q, r)
    }

    /// Returns `s` with `s * a == 1 (mod m)`, or `None` when gcd(a, m) != 1.
    pub fn inverse_mod(a: &QPoly, m: &QPoly) -> Option<QPoly> {
        let (mut r0, mut r1) = (m.clone(), a.divrem(m).1);
        let (mut s0, mut s1) = (QPoly(Vec::new()), QPoly(vec![Rational::from(1)]));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // r0 is the gcd, a constant exactly when a is invertible
        if r0.degree() != Some(0) {
            return None;
        }
        let c = r0.0[0].clone();
        let inv = QPoly(s0.0.into_iter().map(|x| x / &c).collect());
        Some(inv.divrem(m).1)
    }
}
