//! Class-number-one imaginary quadratic fields and the groups W_{K,N}.

use std::collections::HashMap;

use rug::Float;
use serde::Serialize;

use crate::bigcomplex::{bits_for, BigComplex};
use crate::error::{CftError, Result};
use crate::modfunc::{FracIndex, TauPoint};

/// Fundamental discriminants with class number one, excluding -3 and -4.
pub const SUPPORTED_DK: [i64; 7] = [-7, -8, -11, -19, -43, -67, -163];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ImagQuad {
    pub d_k: i64,
    /// x^2 + B x + C is the minimal polynomial of theta.
    pub b: i64,
    pub c: i64,
    pub class_number: u32,
}

pub fn imag_quad(d_k: i64) -> Result<ImagQuad> {
    if d_k == -3 || d_k == -4 {
        return Err(CftError::UnsupportedDiscriminant(d_k, "Q(sqrt(-1)) and Q(sqrt(-3)) are excluded"));
    }
    if !SUPPORTED_DK.contains(&d_k) {
        return Err(CftError::UnsupportedDiscriminant(
            d_k,
            "only the class-number-one discriminants -7, -8, -11, -19, -43, -67, -163 are supported",
        ));
    }
    Ok(ImagQuad {
        d_k,
        b: -d_k,
        c: (d_k * d_k - d_k) / 4,
        class_number: 1,
    })
}

impl ImagQuad {
    /// theta = (d_K + sqrt(d_K)) / 2.
    pub fn theta(&self, digits: u32) -> BigComplex {
        let bits = bits_for(digits);
        let re = Float::with_val(bits, self.d_k) / 2u32;
        let im = Float::with_val(bits, -self.d_k).sqrt() / 2u32;
        BigComplex::new(re, im, digits)
    }

    pub fn theta_point(&self, digits: u32) -> TauPoint {
        TauPoint::new(self.theta(digits)).expect("Im theta > 0")
    }
}

/// [[u - B v, -C v], [v, u]] modulo n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WMatrix {
    pub n: u64,
    pub u: u64,
    pub v: u64,
    #[serde(skip)]
    b: u64,
    #[serde(skip)]
    c: u64,
}

fn md(x: i128, n: u64) -> u64 {
    x.rem_euclid(n as i128) as u64
}

impl WMatrix {
    pub fn new(k: &ImagQuad, n: u64, u: i64, v: i64) -> Self {
        WMatrix {
            n,
            u: md(u as i128, n),
            v: md(v as i128, n),
            b: md(k.b as i128, n),
            c: md(k.c as i128, n),
        }
    }

    pub fn identity(k: &ImagQuad, n: u64) -> Self {
        Self::new(k, n, 1, 0)
    }

    pub fn matrix(&self) -> [[u64; 2]; 2] {
        let (u, v, b, c, n) = (self.u as i128, self.v as i128, self.b as i128, self.c as i128, self.n);
        [[md(u - b * v, n), md(-c * v, n)], [self.v, self.u]]
    }

    pub fn det(&self) -> u64 {
        let (u, v, b, c) = (self.u as i128, self.v as i128, self.b as i128, self.c as i128);
        md((u - b * v) * u + c * v * v, self.n)
    }

    pub fn neg(&self) -> Self {
        WMatrix {
            u: md(-(self.u as i128), self.n),
            v: md(-(self.v as i128), self.n),
            ..*self
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let (x, y) = (self.matrix(), o.matrix());
        let e = |i: usize, j: usize| {
            md(
                x[i][0] as i128 * y[0][j] as i128 + x[i][1] as i128 * y[1][j] as i128,
                self.n,
            )
        };
        let r = WMatrix {
            u: e(1, 1),
            v: e(1, 0),
            ..*self
        };
        debug_assert_eq!(r.matrix(), [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]);
        r
    }

    /// The image modulo m (m divides n).
    pub fn reduce(&self, m: u64) -> Result<Self> {
        if m == 0 || !self.n.is_multiple_of(m) {
            return Err(CftError::LevelMismatch {
                expected: self.n,
                found: m,
            });
        }
        Ok(WMatrix {
            n: m,
            u: self.u % m,
            v: self.v % m,
            b: self.b % m,
            c: self.c % m,
        })
    }

    /// gamma = +-I modulo m.
    pub fn is_pm_identity_mod(&self, m: u64) -> bool {
        let (u, v) = (self.u % m, self.v % m);
        v == 0 && (u == 1 % m || u == (m - 1) % m)
    }

    pub fn is_identity(&self) -> bool {
        self.v == 0 && self.u == 1 % self.n
    }
}

/// The transpose of gamma applied to [r; s], reduced to 0 <= a, b < N.
pub fn act_on_index(g: &WMatrix, idx: &FracIndex) -> Result<FracIndex> {
    if g.n != idx.n {
        return Err(CftError::LevelMismatch {
            expected: g.n,
            found: idx.n,
        });
    }
    let m = g.matrix();
    let (a, b) = (idx.a as i128, idx.b as i128);
    let na = md(m[0][0] as i128 * a + m[1][0] as i128 * b, g.n);
    let nb = md(m[0][1] as i128 * a + m[1][1] as i128 * b, g.n);
    FracIndex::new(na as i64, nb as i64, g.n)
}

/// W_{K,N} with its quotient by +-I. Quotient classes are orbits of
/// gamma -> -gamma, represented by the smaller (u, v); the identity class
/// comes first, the rest in increasing order.
#[derive(Clone, Debug, Serialize)]
pub struct WGroup {
    pub k: ImagQuad,
    pub n: u64,
    pub elements: Vec<WMatrix>,
    pub reps: Vec<WMatrix>,
    #[serde(skip)]
    class_of: HashMap<(u64, u64), usize>,
}

impl WGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn quotient_order(&self) -> usize {
        self.reps.len()
    }

    /// Index of the class of gamma in `reps`.
    pub fn class(&self, g: &WMatrix) -> usize {
        self.class_of[&(g.u, g.v)]
    }

    /// Class of the product of two classes.
    pub fn mul_class(&self, i: usize, j: usize) -> usize {
        self.class(&self.reps[i].mul(&self.reps[j]))
    }

    /// Classes whose elements are +-I modulo m.
    pub fn kernel_mod(&self, m: u64) -> Vec<usize> {
        (0..self.reps.len())
            .filter(|&i| self.reps[i].is_pm_identity_mod(m))
            .collect()
    }

    /// Cosets of a subgroup of the quotient, in order of first member.
    pub fn cosets(&self, sub: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.reps.len()];
        let mut out = Vec::new();
        for i in 0..self.reps.len() {
            if seen[i] {
                continue;
            }
            let coset: Vec<usize> = sub.iter().map(|&h| self.mul_class(i, h)).collect();
            for &c in &coset {
                seen[c] = true;
            }
            out.push(coset);
        }
        out
    }
}

pub(crate) fn w_group(k: &ImagQuad, n: u64) -> WGroup {
    assert!(n >= 1);
    let mut elements = Vec::new();
    for u in 0..n {
        for v in 0..n {
            let g = WMatrix::new(k, n, u as i64, v as i64);
            if crate::arith::gcd(g.det(), n) == 1 {
                elements.push(g);
            }
        }
    }
    let mut reps: Vec<WMatrix> = elements
        .iter()
        .filter(|g| {
            let m = g.neg();
            (g.u, g.v) <= (m.u, m.v)
        })
        .copied()
        .collect();
    let id = WMatrix::identity(k, n);
    let id_rep = if (id.u, id.v) <= (id.neg().u, id.neg().v) { id } else { id.neg() };
    reps.retain(|g| *g != id_rep);
    reps.insert(0, id_rep);
    let mut class_of = HashMap::new();
    for (i, g) in reps.iter().enumerate() {
        class_of.insert((g.u, g.v), i);
        let m = g.neg();
        class_of.insert((m.u, m.v), i);
    }
    WGroup {
        k: *k,
        n,
        elements,
        reps,
        class_of,
    }
}

/// Full pairwise closure check up to this order; larger groups check a
/// strided sample of left factors against every element.
const CLOSURE_FULL_LIMIT: usize = 1500;

/// Exhaustive enumeration, with closure under multiplication checked.
pub fn enumerate_w(k: &ImagQuad, n: u64) -> Result<WGroup> {
    if n < 2 {
        return Err(CftError::InvalidArgument("level must be at least 2".into()));
    }
    let w = w_group(k, n);
    let members: std::collections::HashSet<(u64, u64)> = w.elements.iter().map(|g| (g.u, g.v)).collect();
    let stride = (w.order() / CLOSURE_FULL_LIMIT).max(1);
    for x in w.elements.iter().step_by(stride) {
        for y in &w.elements {
            let z = x.mul(y);
            if !members.contains(&(z.u, z.v)) {
                return Err(CftError::VerificationFailed(format!("W_{{K,{n}}} is not closed")));
            }
        }
    }
    Ok(w)
}

/// [K_(N) : K] = |W_{K,N} / +-I| (class number one).
pub fn ray_degree(k: &ImagQuad, n: u64) -> Result<usize> {
    if n < 2 {
        return Err(CftError::InvalidArgument("level must be at least 2".into()));
    }
    Ok(w_group(k, n).quotient_order())
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeReport {
    pub d_k: i64,
    pub b: i64,
    pub c: i64,
    pub level: u64,
    pub order: usize,
    pub quotient: usize,
    pub representatives: Vec<(u64, u64)>,
}

pub fn degree_report(k: &ImagQuad, n: u64) -> Result<DegreeReport> {
    let w = enumerate_w(k, n)?;
    Ok(DegreeReport {
        d_k: k.d_k,
        b: k.b,
        c: k.c,
        level: n,
        order: w.order(),
        quotient: w.quotient_order(),
        representatives: w.reps.iter().map(|g| (g.u, g.v)).collect(),
    })
}
