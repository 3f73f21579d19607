mod common;

use common::*;
use flagcurve::curves::{osculating_plucker, PrimitiveLift};
use flagcurve::exterior::DiagonalMetric;
use flagcurve::flagmetric::{area, degrees, maximize_area, quadrature_estimate, AreaValue, DegreeVector};
use flagcurve::geometry::{constant_value, curvature, induced_metric, kahler_tan_sq, level_density, InvariantMetric};
use flagcurve::hermpoly::{laplace_log, one_plus_zzbar, RationalFn};
use flagcurve::veronese::{congruence_test, tensor_lift, veronese_gamma, Verdict};
use flagcurve::{Error, GaussianRational};

#[test]
fn psi_a_matches_closed_forms() {
    for a in 1..=3 {
        let l = psi_a(a);
        let (g0, g1) = psi_a_closed_form(q(a * a, 1));
        assert_eq!(l.ranks(), &[1, 1, 1]);
        assert_eq!(l.gamma(0).unwrap(), &g0, "a = {a}");
        assert_eq!(l.gamma(1).unwrap(), &g1, "a = {a}");
    }
}

#[test]
fn psi_a_gaussian_parameter() {
    let l = lift(vec![hol(&["1", "(1+2i)z", "z^2"])], DiagonalMetric::identity(3));
    let (g0, g1) = psi_a_closed_form(q(5, 1));
    assert_eq!(l.gammas(), &[g0, g1]);
}

#[test]
fn psi_a_curvature_is_nonconstant_except_veronese() {
    for a in 1..=3 {
        let rho = induced_metric(&psi_a(a), &InvariantMetric::unit(2)).unwrap();
        assert!(constant_value(&curvature(&rho).unwrap()).is_none());
    }
    let v = lift(vec![hol(&["1", "z", "z^2"])], weights(&[1, 2, 1]));
    for w in [[1, 1], [1, 2]] {
        let m = InvariantMetric::exact(w.iter().map(|&x| q(x, 1)).collect()).unwrap();
        let k = curvature(&induced_metric(&v, &m).unwrap()).unwrap();
        let expected = q(4, 1) / q(2 * w[0] + 2 * w[1], 1);
        assert_eq!(constant_value(&k), Some(GaussianRational::real(expected)));
    }
}

#[test]
fn example1() {
    let l = common::example1();
    assert_eq!(l.ranks(), &[2, 2, 1]);
    assert_eq!(l.flag_type(), "F_{2,2,1}");
    assert_eq!(l.beta(0).unwrap(), &one_plus_zzbar().pow(4));
    assert_eq!(l.gamma(0).unwrap(), &rf("4", "1 + 2z zbar + z^2 zbar^2"));
    let expected = RationalFn::new(parse("1 + 4z zbar + z^2 zbar^2"), parse("1 + z zbar + z^2 zbar^2").pow(2)).unwrap();
    assert_eq!(l.gamma(1).unwrap(), &expected);
    assert_eq!(degrees(&l).unwrap(), DegreeVector::new(vec![4, 2]));
    let m = maximize_area(&degrees(&l).unwrap()).unwrap();
    assert!((m.weights[0] - 2.0 / 5f64.sqrt()).abs() < 1e-12);
    assert!((m.weights[1] - 1.0 / 5f64.sqrt()).abs() < 1e-12);
    assert_eq!(congruence_test(&l).unwrap().verdict, Verdict::NotConstant { level: 1 });
    // ψ_1 alone has nonconstant curvature
    let k1 = curvature(&level_density(&l, 1).unwrap()).unwrap();
    assert!(constant_value(&k1).is_none());
    let k0 = curvature(&level_density(&l, 0).unwrap()).unwrap();
    assert_eq!(constant_value(&k0), Some(GaussianRational::from_ints(1, 0)));
}

fn parse(s: &str) -> flagcurve::ExactPoly {
    flagcurve::hermpoly::parse_poly(s).unwrap()
}

#[test]
fn chixiexu_example() {
    let l = chixiexu();
    assert_eq!(l.ranks(), &[2, 2, 1]);
    assert_eq!(l.gamma(0).unwrap(), &rf("6", "1 + 2z zbar + z^2 zbar^2"));
    assert_eq!(l.gamma(1).unwrap(), &chixiexu_gamma1());
    assert_eq!(degrees(&l).unwrap().as_slice(), &[6, 4]);
    let m = maximize_area(&degrees(&l).unwrap()).unwrap();
    assert_eq!(m.direction, vec![3, 2]);
    assert!((m.weights[0] - 3.0 / 13f64.sqrt()).abs() < 1e-12);
    assert!((m.weights[1] - 2.0 / 13f64.sqrt()).abs() < 1e-12);
    let est = quadrature_estimate(&l, 1, 1e-9).unwrap();
    assert!((est - 4.0).abs() < 1e-6, "{est}");
    assert_eq!(congruence_test(&l).unwrap().verdict, Verdict::NotConstant { level: 1 });
}

#[test]
fn totally_unramified_degrees() {
    for a in 1..=3 {
        let l = psi_a(a);
        assert_eq!(degrees(&l).unwrap().as_slice(), &[2, 2]);
        let m = maximize_area(&degrees(&l).unwrap()).unwrap();
        assert!((m.weights[0] - 0.5f64.sqrt()).abs() < 1e-15);
    }
}

#[test]
fn area_and_noncompact_domain() {
    let l = common::example1();
    let m = InvariantMetric::exact(vec![q(1, 2), q(3, 1)]).unwrap();
    let r = area(&l, &m).unwrap();
    assert_eq!(r.area_over_pi, AreaValue::Exact(q(8, 1)));
    assert!(!r.maximizer);
    let best = maximize_area(&r.degrees).unwrap().metric().unwrap();
    assert!(area(&l, &best).unwrap().maximizer);
    assert_eq!(area(&l.clone().with_compact(false), &m).unwrap_err(), Error::NonCompactDomain);
    assert!(matches!(area(&l, &InvariantMetric::unit(3)), Err(Error::WeightCountMismatch { .. })));
}

#[test]
fn veronese_closed_forms() {
    for n in 2..=5 {
        let l = veronese_exact(n);
        for j in 0..n {
            assert_eq!(l.gamma(j).unwrap(), &veronese_gamma(n, j).unwrap());
        }
        for j in 1..n {
            let t = kahler_tan_sq(&l, j).unwrap();
            let expected = q((j * (n - j + 1)) as i64, ((j + 1) * (n - j)) as i64);
            assert_eq!(constant_value(&t), Some(GaussianRational::real(expected)));
        }
        let cert = congruence_test(&l).unwrap();
        let alphas: Vec<u32> = (0..n).map(|j| ((j + 1) * (n - j)) as u32).collect();
        assert_eq!(cert.verdict, Verdict::ConstantCurvatureAllMetrics { alphas });
    }
}

#[test]
fn osculating_curve_degrees() {
    let l = common::example1();
    let c = osculating_plucker(&l, 1).unwrap();
    assert_eq!(c.rank(), 1);
    assert_eq!(c.norm_square().unwrap(), *l.beta(1).unwrap());
}

#[test]
fn tensor_lift_examples() {
    let l = psi_a(1);
    let eta = tensor_lift(&l, &[1, 2]).unwrap();
    let lhs = laplace_log(&eta.norm_square().unwrap()).unwrap();
    let rhs = l.gamma(0).unwrap() + &l.gamma(1).unwrap().scale(&gq(2, 0));
    assert_eq!(lhs, rhs);
    let e = common::example1();
    let eta = tensor_lift(&e, &[2, 1]).unwrap();
    assert_eq!(eta.norm_square().unwrap(), &e.beta(0).unwrap().pow(2) * e.beta(1).unwrap());
    let v = veronese_exact(1);
    let eta = tensor_lift(&v, &[1]).unwrap();
    assert_eq!(eta.frame()[0], v.sections()[0]);
    assert!(matches!(tensor_lift(&l, &[1]), Err(Error::WeightCountMismatch { .. })));
    assert!(matches!(tensor_lift(&chixiexu(), &[6, 1]), Err(Error::DimensionOverflow(_))));
}

#[test]
fn locally_veronese_certificate() {
    // σ̂_0 = (1+z)(1, z) realises β_0 = |1+z|²(1+zz̄) on the disc
    let l = PrimitiveLift::from_sections(vec![1, 1], DiagonalMetric::identity(2), vec![hol(&["1 + z", "z + z^2"])]).unwrap();
    let cert = congruence_test(&l).unwrap();
    assert_eq!(cert.verdict, Verdict::LocallyVeronese { factors: vec![flagcurve::hermpoly::parse_hol("1 + z").unwrap()] });
    assert_eq!(l.gamma(0).unwrap(), &rf("1", "1 + 2z zbar + z^2 zbar^2"));
}
