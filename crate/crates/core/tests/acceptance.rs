mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use flagcurve::flagmetric::{degrees, maximize_area, quadrature_estimate, DegreeVector};
use flagcurve::geometry::{constant_value, curvature, induced_metric, latitude_point, InvariantMetric, PointEvaluator};
use flagcurve::hermpoly::{laplace_log, RationalFn};
use flagcurve::oracle::GridSpec;
use flagcurve::veronese::{congruence_test, tensor_lift, Verdict};
use flagcurve::{Complex64, ExactLift, GaussianRational, Scalar};
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    ensure(t.elapsed() < limit, || format!("took {:?}, limit {limit:?}", t.elapsed()))
}

fn psi_a_examples() -> Outcome {
    for a in 1..=3 {
        let t = Instant::now();
        let l = psi_a(a);
        let (g0, g1) = psi_a_closed_form(q(a * a, 1));
        ensure(l.gamma(0).unwrap() == &g0, || format!("γ_0 differs for a = {a}"))?;
        ensure(l.gamma(1).unwrap() == &g1, || format!("γ_1 differs for a = {a}"))?;
        within(t, Duration::from_secs(1))?;
    }
    Ok("a = 1, 2, 3 exact".into())
}

fn veronese_float_forms() -> Outcome {
    let t = Instant::now();
    let mut worst = (0f64, 0f64);
    for n in 2..=5 {
        let e = PointEvaluator::new(&veronese_float(n));
        for z in grid_points(10, 5) {
            let s = 1.0 + z.norm_sqr();
            for j in 0..n {
                let expected = ((j + 1) * (n - j)) as f64 / (s * s);
                worst.0 = worst.0.max((e.gamma(j, z).unwrap() - expected).abs());
            }
            for j in 0..=n {
                let k = 4.0 / (n + 2 * j * (n - j)) as f64;
                worst.1 = worst.1.max((e.level_curvature(j, z).unwrap() - k).abs());
            }
        }
    }
    ensure(worst.0 < 1e-8 && worst.1 < 1e-6, || format!("max errors γ {:e}, K {:e}", worst.0, worst.1))?;
    within(t, Duration::from_secs(5))?;
    Ok(format!("max |Δγ| {:.1e}, max |ΔK| {:.1e}", worst.0, worst.1))
}

fn maximizer_error(l: &ExactLift, expected: [f64; 2]) -> f64 {
    let m = maximize_area(&degrees(l).unwrap()).unwrap();
    m.weights.iter().zip(expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

fn example1_criterion() -> Outcome {
    let t = Instant::now();
    let l = example1();
    ensure(l.gamma(0).unwrap() == &rf("4", "1 + 2z zbar + z^2 zbar^2"), || "γ_0 differs".into())?;
    let g1 = RationalFn::new(
        flagcurve::hermpoly::parse_poly("1 + 4z zbar + z^2 zbar^2").unwrap(),
        flagcurve::hermpoly::parse_poly("1 + z zbar + z^2 zbar^2").unwrap().pow(2),
    )
    .unwrap();
    ensure(l.gamma(1).unwrap() == &g1, || "γ_1 differs".into())?;
    ensure(degrees(&l).unwrap() == DegreeVector::new(vec![4, 2]), || "δ ≠ (4, 2)".into())?;
    let err = maximizer_error(&l, [2.0 / 5f64.sqrt(), 1.0 / 5f64.sqrt()]);
    ensure(err < 1e-12, || format!("maximizer error {err:e}"))?;
    let v = congruence_test(&l).unwrap().verdict;
    ensure(matches!(v, Verdict::NotConstant { .. }), || format!("verdict {v}"))?;
    within(t, Duration::from_secs(2))?;
    Ok(format!("δ = (4, 2), {v}"))
}

fn chixiexu_criterion() -> Outcome {
    let t = Instant::now();
    let l = chixiexu();
    ensure(l.gamma(0).unwrap() == &rf("6", "1 + 2z zbar + z^2 zbar^2"), || "γ_0 differs".into())?;
    ensure(l.gamma(1).unwrap() == &chixiexu_gamma1(), || "γ_1 differs".into())?;
    ensure(degrees(&l).unwrap() == DegreeVector::new(vec![6, 4]), || "δ ≠ (6, 4)".into())?;
    let est = quadrature_estimate(&l, 1, 1e-9).unwrap();
    ensure((est - 4.0).abs() < 1e-6, || format!("quadrature δ_1 = {est}"))?;
    let err = maximizer_error(&l, [3.0 / 13f64.sqrt(), 2.0 / 13f64.sqrt()]);
    ensure(err < 1e-12, || format!("maximizer error {err:e}"))?;
    within(t, Duration::from_secs(5))?;
    Ok(format!("δ = (6, 4), quadrature δ_1 = {est:.9}"))
}

fn sqrt2_criterion() -> Outcome {
    let e = PointEvaluator::new(&psi_float(2f64.sqrt()));
    let ks: Vec<f64> = GridSpec::constancy()
        .points()
        .into_iter()
        .map(|(p, th)| e.curvature_with(&[1.0, 1.0], latitude_point(p, th)).unwrap())
        .collect();
    let lo = ks.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ks.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    ensure(hi - lo < 1e-8 && (hi - 1.0).abs() < 1e-8, || format!("K ∈ [{lo}, {hi}]"))?;
    Ok(format!("{} points, spread {:.1e}", ks.len(), hi - lo))
}

fn pure_power_criterion() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let lifts = pure_power_lifts();
    for (name, l) in &lifts {
        let Verdict::ConstantCurvatureAllMetrics { alphas } = congruence_test(l).unwrap().verdict else {
            return Err(format!("{name}: no constant-curvature certificate"));
        };
        let exps: Vec<u32> = l.betas().iter().map(|b| flagcurve::hermpoly::factor_out(b, &flagcurve::hermpoly::one_plus_zzbar()).unwrap().0).collect();
        ensure(alphas == exps, || format!("{name}: α {alphas:?} vs N {exps:?}"))?;
        for _ in 0..5 {
            let w: Vec<BigRational> = (0..l.p()).map(|_| q(rng.gen_range(1..=12), rng.gen_range(1..=5))).collect();
            let total: BigRational = w.iter().zip(&alphas).map(|(l, &a)| l * q(a as i64, 1)).sum();
            let k = curvature(&induced_metric(l, &InvariantMetric::exact(w).unwrap()).unwrap()).unwrap();
            let expected = GaussianRational::real(q(4, 1) / total);
            ensure(constant_value(&k) == Some(expected), || format!("{name}: curvature not 4/Σλα"))?;
        }
    }
    within(t, Duration::from_secs(10))?;
    Ok(format!("{} lifts × 5 weight vectors", lifts.len()))
}

fn tensor_identity_criterion() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for i in 0..20 {
        let l = random_small_lift(&mut rng);
        let k = random_exponents(&mut rng, &l, 100);
        let eta = tensor_lift(&l, &k).unwrap();
        let lhs = laplace_log(&eta.norm_square().unwrap()).unwrap();
        let rhs = l
            .gammas()
            .iter()
            .zip(&k)
            .fold(RationalFn::zero(), |acc, (g, &kj)| &acc + &g.scale(&gq(kj as i64, 0)));
        ensure(lhs == rhs, || format!("lift {i}: ranks {:?}, k {k:?}", l.ranks()))?;
    }
    within(t, Duration::from_secs(30))?;
    Ok(format!("20 lifts in {:.1?}", t.elapsed()))
}

fn fd_worst<F: Scalar>(l: &flagcurve::curves::PrimitiveLift<F>, gamma: impl Fn(usize, Complex64) -> f64) -> f64 {
    let mut worst = 0f64;
    for z in grid_points(5, 5) {
        for j in 0..l.p() {
            worst = worst.max(fd_gamma_error(l, j, z, gamma(j, z)));
        }
    }
    worst
}

fn oracle_criterion() -> Outcome {
    let mut lifts = example_lifts();
    lifts.extend(pure_power_lifts());
    let (mut fd, mut quad) = (0f64, 0f64);
    for (name, l) in &lifts {
        fd = fd.max(fd_worst(l, |j, z| l.gamma(j).unwrap().eval(z).unwrap().re));
        for (j, &d) in degrees(l).unwrap().as_slice().iter().enumerate() {
            let e = quadrature_estimate(l, j, 1e-8).map_err(|e| format!("{name}: {e}"))?;
            quad = quad.max((e - d as f64).abs());
        }
    }
    let floats = [chixiexu_float(), psi_float(2f64.sqrt()), veronese_float(2), veronese_float(3), veronese_float(4), veronese_float(5)];
    for l in &floats {
        let e = PointEvaluator::new(l);
        fd = fd.max(fd_worst(l, |j, z| e.gamma(j, z).unwrap()));
    }
    ensure(fd < 1e-5 && quad < 0.25, || format!("fd {fd:e}, quadrature {quad:e}"))?;
    Ok(format!("{} lifts, max fd rel {:.1e}, max |quad − δ| {:.1e}", lifts.len() + floats.len(), fd, quad))
}

fn run_prop<S: Strategy>(name: &str, s: S, f: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases: 500, failure_persistence: None, ..Config::default() });
    runner.run(&s, f).map_err(|e| format!("{name}: {e}"))
}

fn property_criterion() -> Outcome {
    run_prop("ring axioms", (herm_poly(), herm_poly(), herm_poly()), |(a, b, c)| check_ring_axioms(&a, &b, &c))?;
    run_prop("wedge", (hol_vectors(4, 3), hol_vectors(4, 1), gaussian()), |(vs, w, c)| check_wedge(&vs, &w[0], &c))?;
    run_prop("log additivity", (positive_poly(), positive_poly()), |(p, r)| check_log_additivity(&p, &r))?;
    run_prop("scaling", (positive_poly(), positive_poly(), 1i64..=9, 1i64..=9), |(n, d, a, b)| {
        check_scaling(&n, &d, &q(a, b))
    })?;
    run_prop("signed permutations", permuted_curve(), |(f, p, u)| check_signed_permutation(&f, &p, &u))?;
    Ok("5 suites × 500 cases".into())
}

fn alarm_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut lifts = example_lifts();
    lifts.extend(pure_power_lifts());
    lifts.extend((0..30).map(|i| (format!("random {i}"), random_small_lift(&mut rng))));
    for (name, l) in &lifts {
        let v = congruence_test(l).unwrap().verdict;
        ensure(!matches!(v, Verdict::InconclusiveAlarm { .. }), || format!("{name}: alarm"))?;
    }
    Ok(format!("{} lifts, no alarm", lifts.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 Ψ^a exact closed forms", psi_a_examples),
        ("2 Veronese float closed forms", veronese_float_forms),
        ("3 F_{2,2,1} curve in C^5", example1_criterion),
        ("4 ChiXieXu curve", chixiexu_criterion),
        ("5 Ψ^√2 constant curvature", sqrt2_criterion),
        ("6 pure-power certificates", pure_power_criterion),
        ("7 tensor-lift identity", tensor_identity_criterion),
        ("8 oracle agreement", oracle_criterion),
        ("9 property suites", property_criterion),
        ("10 alarm never fires", alarm_criterion),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match r {
            Ok(detail) => println!("PASS {name} ({detail}; {:.2?})", t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
