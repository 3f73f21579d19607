#![allow(dead_code)]

use flagcurve::curves::{HolCurve, PrimitiveLift};
use flagcurve::exterior::{binomial, wedge, DiagonalMetric, PolyVector};
use flagcurve::geometry::{curvature, MetricDensity};
use flagcurve::hermpoly::{laplace_log, parse_hol, parse_poly, HermPoly, Monomial, RationalFn, UniPoly};
use flagcurve::oracle::{float_lift, FloatCurve};
use flagcurve::{ExactLift, ExactPoly, ExactRationalFn, FloatLift, GaussianRational, HolPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

pub fn gq(re: i64, im: i64) -> GaussianRational {
    GaussianRational::from_ints(re, im)
}

pub fn hol(xs: &[&str]) -> PolyVector<HolPoly> {
    PolyVector::new(xs.iter().map(|s| parse_hol(s).unwrap()).collect())
}

pub fn rf(n: &str, d: &str) -> ExactRationalFn {
    RationalFn::new(parse_poly(n).unwrap(), parse_poly(d).unwrap()).unwrap()
}

pub fn weights(ws: &[i64]) -> DiagonalMetric {
    DiagonalMetric::new(ws.iter().map(|&w| BigRational::from_integer(w.into())).collect()).unwrap()
}

pub fn lift(frames: Vec<PolyVector<HolPoly>>, metric: DiagonalMetric) -> ExactLift {
    PrimitiveLift::from_curve(&HolCurve::new(frames, metric).unwrap()).unwrap()
}

/// `u = z z̄` as a polynomial.
pub fn u() -> ExactPoly {
    HermPoly::monomial(GaussianRational::one(), 1, 1)
}

pub fn cst(c: BigRational) -> ExactPoly {
    HermPoly::constant(GaussianRational::real(c))
}

/// ψ_0^a = [1, a z, z²] for integer a.
pub fn psi_a(a: i64) -> ExactLift {
    let az = format!("{a}z");
    lift(vec![hol(&["1", &az, "z^2"])], DiagonalMetric::identity(3))
}

/// γ_0, γ_1 of ψ_0^a written out with |a|² = `a2`, independent of the pipeline.
pub fn psi_a_closed_form(a2: BigRational) -> (ExactRationalFn, ExactRationalFn) {
    let one = ExactPoly::one();
    let u = u();
    let a2 = cst(a2);
    let f0 = &(&one + &(&a2 * &u)) + &u.pow(2);
    let f1 = &(&cst(q(4, 1)) * &u) + &(&a2 * &(&one + &u.pow(2)));
    let g0 = RationalFn::new(f1.clone(), f0.pow(2)).unwrap();
    let g1 = RationalFn::new(&(&cst(q(4, 1)) * &a2) * &f0, f1.pow(2)).unwrap();
    (g0, g1)
}

pub fn example1() -> ExactLift {
    lift(vec![hol(&["1", "0", "2z", "2z^2", "z^2"]), hol(&["0", "1", "0", "z^2", "0"])], DiagonalMetric::identity(5))
}

/// The curve with √6 entries; weight 6 on the third coordinate.
pub fn chixiexu() -> ExactLift {
    lift(
        vec![hol(&["1", "0", "-z^2", "-2z^3", "-3z^4"]), hol(&["0", "1", "z", "3z^2", "4z^3"])],
        weights(&[1, 1, 6, 1, 1]),
    )
}

pub fn chixiexu_float() -> FloatLift {
    let s6 = 6f64.sqrt();
    let c = |re: f64| flagcurve::Complex64::new(re, 0.0);
    let v = |xs: &[(f64, usize)]| {
        PolyVector::new(xs.iter().map(|&(a, d)| UniPoly::monomial(c(a), d)).collect::<Vec<_>>())
    };
    let curve = FloatCurve::standard(vec![
        v(&[(1.0, 0), (0.0, 0), (-s6, 2), (-2.0, 3), (-3.0, 4)]),
        v(&[(0.0, 0), (1.0, 0), (s6, 1), (3.0, 2), (4.0, 3)]),
    ])
    .unwrap();
    float_lift(&curve).unwrap()
}

/// ChiXieXu γ_1 as displayed, `|z^6|` read as `|z|^6`.
pub fn chixiexu_gamma1() -> ExactRationalFn {
    let num = parse_poly("4 + 36z^2 zbar^2 + 80z^3 zbar^3 + 36z^4 zbar^4 + 4z^6 zbar^6").unwrap();
    let den = parse_poly("1 + 4z zbar + 4z^3 zbar^3 + z^4 zbar^4").unwrap();
    RationalFn::new(num, den.pow(2)).unwrap()
}

/// `(1, z, …, zⁿ)` with binomial coordinate weights.
pub fn veronese_exact(n: usize) -> ExactLift {
    let entries = (0..=n).map(|r| UniPoly::monomial(GaussianRational::one(), r)).collect();
    let w = (0..=n).map(|r| BigRational::from_integer(BigInt::from(binomial(n, r)))).collect();
    lift(vec![PolyVector::new(entries)], DiagonalMetric::new(w).unwrap())
}

/// Exact lifts of the worked examples, with names.
pub fn example_lifts() -> Vec<(String, ExactLift)> {
    let mut v: Vec<(String, ExactLift)> = (1..=3).map(|a| (format!("psi_a{a}"), psi_a(a))).collect();
    v.push(("example1".into(), example1()));
    v.push(("chixiexu".into(), chixiexu()));
    for n in 2..=4 {
        v.push((format!("veronese{n}"), veronese_exact(n)));
    }
    v
}

/// Ten lifts whose β_j are constants times powers of `1 + z z̄`.
pub fn pure_power_lifts() -> Vec<(String, ExactLift)> {
    let mut v: Vec<(String, ExactLift)> = (1..=5).map(|n| (format!("V^{n}"), veronese_exact(n))).collect();
    for n in 3..=5 {
        let e: Vec<HolPoly> = (0..=n).map(|r| UniPoly::monomial(GaussianRational::one(), r)).collect();
        let f = PolyVector::new(e);
        let w = (0..=n).map(|r| BigRational::from_integer(BigInt::from(binomial(n, r)))).collect();
        v.push((format!("V^{n} osculating pair"), lift(vec![f.clone(), f.derivative()], DiagonalMetric::new(w).unwrap())));
    }
    let rotated = HolCurve::new(vec![hol(&["1", "(i)z", "-z^2", "(-i)z^3"])], weights(&[1, 3, 3, 1])).unwrap();
    let rotated = rotated.signed_permutation(&[3, 0, 2, 1], &[gq(0, 1), gq(-1, 0), gq(1, 0), gq(0, -1)]).unwrap();
    v.push(("rotated V^3".into(), PrimitiveLift::from_curve(&rotated).unwrap()));
    v.push(("rescaled V^4".into(), lift(vec![hol(&["1", "z", "z^2", "z^3", "z^4"])], weights(&[2, 8, 12, 8, 2]))));
    v
}

fn random_hol(rng: &mut impl Rng, max_deg: usize) -> HolPoly {
    let coeffs = (0..=max_deg)
        .map(|_| if rng.gen_bool(0.5) { gq(rng.gen_range(-3..=3), rng.gen_range(-1..=1)) } else { GaussianRational::zero() })
        .collect();
    UniPoly::new(coeffs)
}

/// A random full curve with small Gaussian-integer coefficients in ℂ^n,
/// n ≤ 4, of rank one or two, retried until its lift exists.
pub fn random_small_lift(rng: &mut impl Rng) -> ExactLift {
    loop {
        let n = rng.gen_range(2..=4);
        let rank = if n == 4 && rng.gen_bool(0.5) { 2 } else { 1 };
        let frames: Vec<PolyVector<HolPoly>> =
            (0..rank).map(|_| PolyVector::new((0..n).map(|_| random_hol(rng, n - 1)).collect())).collect();
        let w: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        let Ok(c) = HolCurve::new(frames, weights(&w)) else { continue };
        if let Ok(l) = PrimitiveLift::from_curve(&c) {
            if l.sections().iter().all(|s| s.max_degree().unwrap_or(0) <= 8) {
                return l;
            }
        }
    }
}

/// Random `|h_0|² + … + |h_k|²` with `h_0` a nonzero constant, so positive.
pub fn random_positive(rng: &mut impl Rng) -> ExactPoly {
    let mut p = cst(q(rng.gen_range(1..=4), 1));
    for _ in 0..rng.gen_range(1..=2) {
        p = &p + &random_hol(rng, 2).norm_sq();
    }
    p
}

/// Tensor exponents in 1..=3, redrawn until the tensor lift has dimension
/// at most `cap`; each exponent falls back to 1 if needed.
pub fn random_exponents(rng: &mut impl Rng, l: &ExactLift, cap: usize) -> Vec<u32> {
    let dim = |k: &[u32]| l.sections().iter().zip(k).map(|(s, &e)| s.dim().pow(e)).product::<usize>();
    for _ in 0..20 {
        let k: Vec<u32> = (0..l.p()).map(|_| rng.gen_range(1..=3)).collect();
        if dim(&k) <= cap {
            return k;
        }
    }
    vec![1; l.p()]
}

pub fn random_perm(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

// strategies and checks shared by the property suites

pub fn gaussian() -> impl Strategy<Value = GaussianRational> {
    (-6i64..=6, -6i64..=6, 1i64..=3).prop_map(|(a, b, d)| GaussianRational::new(q(a, d), q(b, d)))
}

pub fn herm_poly() -> impl Strategy<Value = ExactPoly> {
    proptest::collection::vec((0u32..4, 0u32..4, gaussian()), 0..6)
        .prop_map(|ts| HermPoly::from_terms(ts.into_iter().map(|(a, b, c)| (Monomial::new(a, b), c))))
}

pub fn hol_poly(max_deg: usize) -> impl Strategy<Value = HolPoly> {
    proptest::collection::vec(gaussian(), 1..=max_deg + 1).prop_map(UniPoly::new)
}

pub fn hol_vectors(n: usize, k: usize) -> impl Strategy<Value = Vec<PolyVector<HolPoly>>> {
    proptest::collection::vec(proptest::collection::vec(hol_poly(2), n).prop_map(PolyVector::new), k)
}

/// Positive real polynomial `c + Σ|h_i|²`.
pub fn positive_poly() -> impl Strategy<Value = ExactPoly> {
    (1i64..=5, proptest::collection::vec(hol_poly(2), 1..=2)).prop_map(|(c, hs)| {
        hs.iter().fold(cst(q(c, 1)), |acc, h| &acc + &h.norm_sq())
    })
}

pub fn check_ring_axioms(a: &ExactPoly, b: &ExactPoly, c: &ExactPoly) -> Result<(), TestCaseError> {
    prop_assert_eq!(&(&(a + b) + c), &(a + &(b + c)));
    prop_assert_eq!(&(a + b), &(b + a));
    prop_assert_eq!(&(a * b), &(b * a));
    prop_assert_eq!(&(&(a * b) * c), &(a * &(b * c)));
    prop_assert_eq!(&(a * &(b + c)), &(&(a * b) + &(a * c)));
    prop_assert_eq!(&(a + &ExactPoly::zero()), a);
    prop_assert_eq!(&(a * &ExactPoly::one()), a);
    prop_assert!((a - a).is_zero());
    prop_assert_eq!(&(a * b).conj(), &(&a.conj() * &b.conj()));
    Ok(())
}

pub fn check_wedge(vs: &[PolyVector<HolPoly>], w: &PolyVector<HolPoly>, c: &GaussianRational) -> Result<(), TestCaseError> {
    let n = vs[0].dim();
    let base = wedge(vs, n).unwrap();
    let mut swapped = vs.to_vec();
    swapped.swap(0, 1);
    prop_assert_eq!(wedge(&swapped, n).unwrap(), base.scale(&UniPoly::constant(-GaussianRational::one())));
    let mut dup = vs.to_vec();
    dup[1] = dup[0].clone();
    prop_assert!(wedge(&dup, n).unwrap().is_zero());
    let cp = UniPoly::constant(c.clone());
    let mut lin = vs.to_vec();
    lin[0] = vs[0].add(&w.scale(&cp));
    let mut only_w = vs.to_vec();
    only_w[0] = w.clone();
    let expected = base.add(&wedge(&only_w, n).unwrap().scale(&cp));
    prop_assert_eq!(wedge(&lin, n).unwrap(), expected);
    Ok(())
}

pub fn check_log_additivity(p: &ExactPoly, r: &ExactPoly) -> Result<(), TestCaseError> {
    let lhs = laplace_log(&(p * r)).unwrap();
    let rhs = &laplace_log(p).unwrap() + &laplace_log(r).unwrap();
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

pub fn check_scaling(num: &ExactPoly, den: &ExactPoly, c: &BigRational) -> Result<(), TestCaseError> {
    let rho = MetricDensity::new(RationalFn::new(num.clone(), den.clone()).unwrap()).unwrap();
    let k = curvature(&rho).unwrap();
    let kc = curvature(&rho.scale(&GaussianRational::real(c.clone()))).unwrap();
    prop_assert_eq!(kc.scale(&GaussianRational::real(c.clone())), k);
    Ok(())
}

pub fn check_signed_permutation(
    frame: &PolyVector<HolPoly>,
    perm: &[usize],
    units: &[GaussianRational],
) -> Result<(), TestCaseError> {
    let n = frame.dim();
    let Ok(c) = HolCurve::new(vec![frame.clone()], DiagonalMetric::identity(n)) else { return Ok(()) };
    let Ok(l) = PrimitiveLift::from_curve(&c) else { return Ok(()) };
    let moved = c.signed_permutation(perm, units).unwrap();
    let lm = PrimitiveLift::from_curve(&moved).unwrap();
    prop_assert_eq!(l.ranks(), lm.ranks());
    prop_assert_eq!(l.gammas(), lm.gammas());
    Ok(())
}

pub fn unit() -> impl Strategy<Value = GaussianRational> {
    prop_oneof![Just(gq(1, 0)), Just(gq(-1, 0)), Just(gq(0, 1)), Just(gq(0, -1))]
}

/// Full-ish random rank-one frame in ℂ³ with a permutation and units.
pub fn permuted_curve() -> impl Strategy<Value = (PolyVector<HolPoly>, Vec<usize>, Vec<GaussianRational>)> {
    (
        proptest::collection::vec(hol_poly(3), 3).prop_map(PolyVector::new),
        Just(vec![0usize, 1, 2]).prop_shuffle(),
        proptest::collection::vec(unit(), 3),
    )
}

/// Ψ^a with a real float parameter: `(1, a z, z²)` with standard metric.
pub fn psi_float(a: f64) -> FloatLift {
    let c = |re: f64| flagcurve::Complex64::new(re, 0.0);
    let v = PolyVector::new(vec![UniPoly::monomial(c(1.0), 0), UniPoly::monomial(c(a), 1), UniPoly::monomial(c(1.0), 2)]);
    float_lift(&FloatCurve::standard(vec![v]).unwrap()).unwrap()
}

pub fn veronese_float(n: usize) -> FloatLift {
    float_lift(&FloatCurve::veronese(n).unwrap()).unwrap()
}

/// Sample points `z = cot(φ/2) e^{iϑ}` over a latitude grid.
pub fn grid_points(phis: usize, thetas: usize) -> Vec<flagcurve::Complex64> {
    let g = flagcurve::oracle::GridSpec::new(phis, thetas).unwrap();
    g.points().into_iter().map(|(p, t)| flagcurve::geometry::latitude_point(p, t)).collect()
}

/// Relative error of the five-point finite-difference γ_j against `exact`.
/// The step shrinks with |z| since β may keep a harmonic factor `|z|^{2k}`.
pub fn fd_gamma_error<F: flagcurve::Scalar>(l: &flagcurve::curves::PrimitiveLift<F>, j: usize, z: flagcurve::Complex64, exact: f64) -> f64 {
    let beta = l.beta(j).unwrap().clone();
    let fd = flagcurve::oracle::fd_mixed_log(|w| beta.eval(w).re, z, 1e-3 * z.norm().min(1.0)).unwrap();
    (fd - exact).abs() / exact.abs()
}
