//! Integer recognition of numerically computed conjugate sets.

use rug::Integer;
use serde::Serialize;

use crate::bigcomplex::BigComplex;
use crate::error::{CftError, Result};

/// prod (x - r), coefficients from the constant term up.
pub fn poly_from_roots(roots: &[BigComplex]) -> Vec<BigComplex> {
    let digits = roots.iter().map(BigComplex::digits).max().unwrap_or(32);
    let mut c = vec![BigComplex::one(digits)];
    for r in roots {
        let mut next = vec![BigComplex::zero(digits); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] = &next[i + 1] + ci;
            next[i] = &next[i] - &(ci * r);
        }
        c = next;
    }
    c
}

#[derive(Clone, Debug, Serialize)]
pub struct IntPoly {
    /// Monic; constant term first.
    #[serde(serialize_with = "crate::report::ser_ints")]
    pub coeffs: Vec<Integer>,
    /// log10 of the largest distance from a coefficient to its rounding.
    pub residual_log10: f64,
    pub tol_digits: u32,
}

impl IntPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Nearest integer to z and log10 |z - that integer|.
pub fn round_to_integer(z: &BigComplex) -> (Integer, f64) {
    let (re, _) = z.round_parts();
    let diff = z - &BigComplex::from_real(rug::Float::with_val(z.bits(), &re), z.digits());
    (re, diff.abs_log10())
}

/// The monic integer polynomial with the given roots, if its coefficients
/// are integers to within 10^-tol_digits.
pub fn recognize_alg_int(conjugates: &[BigComplex], tol_digits: u32) -> Result<IntPoly> {
    if conjugates.is_empty() {
        return Err(CftError::EmptyInput);
    }
    let poly = poly_from_roots(conjugates);
    let mut coeffs = Vec::with_capacity(poly.len());
    let mut worst = f64::NEG_INFINITY;
    for c in &poly {
        let (n, r) = round_to_integer(c);
        worst = worst.max(r);
        coeffs.push(n);
    }
    if worst >= -f64::from(tol_digits) {
        return Err(CftError::RecognitionFailed {
            residual_log10: worst,
            tol_digits,
        });
    }
    Ok(IntPoly {
        coeffs,
        residual_log10: worst,
        tol_digits,
    })
}

/// log10 of the largest coefficient magnitude of prod (x - r).
pub fn coefficient_scale_log10(roots: &[BigComplex]) -> f64 {
    poly_from_roots(roots)
        .iter()
        .map(BigComplex::abs_log10)
        .fold(0.0, f64::max)
}

/// log10 of |x - y| / max(|x|, |y|); -inf if equal, 0 if both vanish.
pub fn separation_log10(x: &BigComplex, y: &BigComplex) -> f64 {
    let scale = x.abs_log10().max(y.abs_log10());
    if scale == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    (x - y).abs_log10() - scale
}

/// Smallest pairwise relative separation; +inf for fewer than two values.
pub fn min_separation_log10(values: &[BigComplex]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            best = best.min(separation_log10(&values[i], &values[j]));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monic_from_integer_roots() {
        let roots: Vec<BigComplex> = [1, -2, 3].iter().map(|&r| BigComplex::from_int(r, 40)).collect();
        let p = recognize_alg_int(&roots, 20).unwrap();
        let want: Vec<Integer> = [6, -5, -2, 1].iter().map(|&c| Integer::from(c)).collect();
        assert_eq!(p.coeffs, want);
    }

    #[test]
    fn conjugate_pair() {
        // roots of x^2 + x + 2
        let s = BigComplex::from_int(-7, 40).sqrt();
        let r1 = (&s - &BigComplex::one(40)).scale_rat(&rug::Rational::from((1, 2)));
        let r2 = r1.conj();
        let p = recognize_alg_int(&[r1, r2], 30).unwrap();
        assert_eq!(p.coeffs, vec![Integer::from(2), Integer::from(1), Integer::from(1)]);
    }

    #[test]
    fn rejects_non_integers() {
        let half = BigComplex::from_f64(0.5, 0.0, 40);
        assert!(matches!(
            recognize_alg_int(&[half], 20),
            Err(CftError::RecognitionFailed { .. })
        ));
        assert_eq!(recognize_alg_int(&[], 20).unwrap_err(), CftError::EmptyInput);
    }

    #[test]
    fn separations() {
        let a = BigComplex::from_f64(1.0, 0.0, 30);
        let b = BigComplex::from_f64(1.0 + 1e-10, 0.0, 30);
        assert!((min_separation_log10(&[a.clone(), b]) + 10.0).abs() < 0.1);
        assert_eq!(min_separation_log10(&[a]), f64::INFINITY);
    }
}
