//! Numeric values checked against independent evaluations: frozen
//! 70-digit values from theta-function and q-product formulas in mpmath,
//! and direct lattice sums.

use cft_core::bigcomplex::{BigComplex, Prec};
use cft_core::cm::{imag_quad, integrality_probe, ModFnSpec};
use cft_core::modfunc::{
    eisenstein, eta, j_invariant, rel_diff_log10, siegel_g, wp_value, EtaNorm, FracIndex,
    TauPoint,
};

fn prec(d: u32) -> Prec {
    Prec::new(d).unwrap()
}

fn frozen(re: &str, im: &str) -> BigComplex {
    BigComplex::parse(&format!("{re},{im}"), 80).unwrap()
}

fn tau(re: &str, im: &str) -> TauPoint {
    TauPoint::new(frozen(re, im)).unwrap()
}

fn idx(a: i64, b: i64, n: u64) -> FracIndex {
    FracIndex::new(a, b, n).unwrap()
}

#[test]
fn eta_and_j_against_mpmath() {
    let t = tau("0.1", "0.9");
    let e = eta(&t, EtaNorm::Classical, &prec(80)).unwrap();
    let expect = frozen(
        "0.7876136691758296277596989144371652854922343755623660885377280198946844",
        "0.0189890247646065043961426897464173540942447058185222429183157881678305",
    );
    assert!(rel_diff_log10(&e, &expect) < -65.0);
    let j = j_invariant(&t, &prec(80)).unwrap();
    let expect = frozen(
        "1599.965416499710517095971244617922369293738511555748702973599821285188",
        "524.6855042265258209782959610524302596993029906524392054456336082778627",
    );
    assert!(rel_diff_log10(&j, &expect) < -65.0);
}

#[test]
fn weierstrass_against_theta_formula() {
    let t = tau("-0.3", "1.2");
    let cases = [
        (
            idx(1, 2, 5),
            "2.060790916904982080313475524205537039521012727396419914529154743086247",
            "-4.355128385810751713249071302432192014128740393348070220168959066489859",
        ),
        (
            idx(0, 1, 2),
            "6.553764503560922718895397088588901173837280428528236244203859424483033",
            "-0.0797957609302011897579269953274810493878572620890818066546062859063712",
        ),
    ];
    for (i, re, im) in cases {
        let v = wp_value(&i, &t, &prec(80)).unwrap();
        assert!(rel_diff_log10(&v, &frozen(re, im)) < -65.0, "{i}");
    }
}

#[test]
fn siegel_against_mpmath_product() {
    let t = tau("-0.3", "1.2");
    let cases = [
        (
            idx(1, 3, 4),
            "0.05970680604284479838294552938110503000754237358716612096439276070752621",
            "1.159996090690283316708787903710560694424537851338195428561925703026344",
        ),
        (
            idx(0, 1, 3),
            "0.1449871170960644528767952173919606622439688678241471742851510635302627",
            "0.9124288252098684762216597493957887112977153431594301448110005496496638",
        ),
    ];
    for (i, re, im) in cases {
        let v = siegel_g(&i, &t, &prec(80)).unwrap();
        assert!(rel_diff_log10(&v, &frozen(re, im)) < -65.0, "{i}");
    }
}

/// sum over (m, n) != 0 with max(|m|, |n|) <= r of (m tau + n)^-4.
fn lattice_g4(tau: (f64, f64), r: i64) -> (f64, f64) {
    let mut acc = (0.0, 0.0);
    for m in -r..=r {
        for n in -r..=r {
            if m == 0 && n == 0 {
                continue;
            }
            let (a, b) = (m as f64 * tau.0 + n as f64, m as f64 * tau.1);
            let (a2, b2) = (a * a - b * b, 2.0 * a * b);
            let (a4, b4) = (a2 * a2 - b2 * b2, 2.0 * a2 * b2);
            let d = a4 * a4 + b4 * b4;
            acc.0 += a4 / d;
            acc.1 -= b4 / d;
        }
    }
    acc
}

#[test]
fn g2_against_lattice_sum() {
    let t = (0.23, 1.1);
    // tail ~ 1/r^2: Richardson on r and 2r
    let (s1, s2) = (lattice_g4(t, 200), lattice_g4(t, 400));
    let g4 = ((4.0 * s2.0 - s1.0) / 3.0, (4.0 * s2.1 - s1.1) / 3.0);
    let g2 = (60.0 * g4.0, 60.0 * g4.1);
    let e = eisenstein(&TauPoint::from_f64(t.0, t.1, 40).unwrap(), &prec(40)).unwrap();
    let (re, im) = e.g2.to_f64_pair();
    let rel = ((re - g2.0).powi(2) + (im - g2.1).powi(2)).sqrt() / (re * re + im * im).sqrt();
    assert!(rel < 1e-7, "relative error {rel}");
}

#[test]
fn precision_scaling() {
    let t = TauPoint::from_f64(0.17, 0.83, 128).unwrap();
    let i = idx(2, 5, 7);
    let lo = siegel_g(&i, &t, &prec(64)).unwrap();
    let hi = siegel_g(&i, &t, &prec(128)).unwrap();
    assert!(rel_diff_log10(&lo, &hi) < -60.0);
    let lo = j_invariant(&t, &prec(64)).unwrap();
    let hi = j_invariant(&t, &prec(128)).unwrap();
    assert!(rel_diff_log10(&lo, &hi) < -60.0);
}

#[test]
fn recognition_residual_shrinks_with_precision() {
    let ks = [imag_quad(-7).unwrap()];
    let spec = ModFnSpec::parse("siegel:0,1,3").unwrap();
    let r = |d| {
        let rep = integrality_probe(&spec, &ks, prec(d), 20).unwrap();
        rep.points[0].polynomial.as_ref().unwrap().residual_log10
    };
    let (lo, hi) = (r(64), r(128));
    assert!(hi < lo - 10.0, "{lo} -> {hi}");
}

#[test]
fn siegel_half_period_at_i() {
    // g_[0;1/2](i) = 2^(1/4) i
    let v = siegel_g(&idx(0, 1, 2), &tau("0", "1"), &prec(60)).unwrap();
    let expect = frozen("0", "1.189207115002721066717499970560475915292972092463817413019002224719467");
    assert!(rel_diff_log10(&v, &expect) < -55.0);
}
