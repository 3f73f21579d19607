//! The Veronese sequence in closed form, tensor-product lifts, and the
//! norm-square factorization certificate for constant curvature.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::curves::{HolCurve, PrimitiveLift};
use crate::error::{Error, Result};
use crate::exterior::{binomial, DiagonalMetric, PolyVector};
use crate::oracle::fd_mixed_log;
use crate::geometry::{constant_value, curvature, InvariantMetric, MetricDensity};
use crate::hermpoly::{factor_out, Monomial, laplace_log, norm_square_factor, one_plus_zzbar, RationalFn, UniPoly};
use crate::scalar::{Complex64, GaussianRational, Scalar};
use crate::{ExactPoly, ExactRationalFn, HolPoly};

/// Largest ambient dimension [`tensor_lift`] will build.
pub const MAX_TENSOR_DIM: u128 = 1_000_000;

fn int(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// γ_j = (j+1)(n−j)/(1+zz̄)² of the n-Veronese sequence (zero at `j = n`).
pub fn veronese_gamma(n: usize, j: usize) -> Result<ExactRationalFn> {
    if j > n {
        return Err(Error::IndexOutOfRange { index: j, bound: n + 1 });
    }
    let c = GaussianRational::real(int((j + 1) * (n - j)));
    Ok(RationalFn::new(ExactPoly::constant(c), one_plus_zzbar().pow(2))?)
}

/// `K(V_jⁿ) = 4/(n + 2j(n−j))`.
pub fn veronese_curvature(n: usize, j: usize) -> Result<BigRational> {
    if j > n {
        return Err(Error::IndexOutOfRange { index: j, bound: n + 1 });
    }
    Ok(int(4) / int(n + 2 * j * (n - j)))
}

/// Component `f_{j,r}` of `V_jⁿ`:
/// `j!/(1+zz̄)^j · √C(n,r) · z^{r−j} Σ_k (−1)^k C(r, j−k) C(n−r, k) (zz̄)^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct VeroneseComponent {
    scale: f64,
    j: usize,
    /// `(power of z, power of z̄, coefficient)` of the polynomial part.
    terms: Vec<(usize, usize, f64)>,
}

impl VeroneseComponent {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let w = z.conj();
        let poly: Complex64 = self.terms.iter().map(|&(a, b, c)| c * z.powu(a as u32) * w.powu(b as u32)).sum();
        poly * self.scale / (1.0 + z.norm_sqr()).powi(self.j as i32)
    }
}

pub fn veronese_component(n: usize, j: usize, r: usize) -> Result<VeroneseComponent> {
    if j > n {
        return Err(Error::IndexOutOfRange { index: j, bound: n + 1 });
    }
    if r > n {
        return Err(Error::IndexOutOfRange { index: r, bound: n + 1 });
    }
    let factorial: f64 = (1..=j).map(|i| i as f64).product();
    let scale = factorial * (binomial(n, r) as f64).sqrt();
    let terms = (0..=j.min(n - r))
        .filter(|&k| j - k <= r)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            (r + k - j, k, sign * (binomial(r, j - k) * binomial(n - r, k)) as f64)
        })
        .collect();
    Ok(VeroneseComponent { scale, j, terms })
}

/// Closed-form data of `V_jⁿ`.
#[derive(Clone, Debug)]
pub struct VeroneseData {
    pub n: usize,
    pub j: usize,
    pub gamma: ExactRationalFn,
    pub curvature: BigRational,
    pub components: Vec<VeroneseComponent>,
}

pub fn veronese_data(n: usize, j: usize) -> Result<VeroneseData> {
    Ok(VeroneseData {
        n,
        j,
        gamma: veronese_gamma(n, j)?,
        curvature: veronese_curvature(n, j)?,
        components: (0..=n).map(|r| veronese_component(n, j, r)).collect::<Result<_>>()?,
    })
}

/// `(1, z, …, zⁿ)` with coordinate weights `C(n, r)`, i.e. the Veronese
/// curve `(1, √C(n,1) z, …, zⁿ)` in exact arithmetic.
pub fn veronese_curve(n: usize) -> Result<HolCurve> {
    let entries = (0..=n).map(|r| UniPoly::monomial(GaussianRational::one(), r)).collect();
    let weights = DiagonalMetric::new((0..=n).map(|r| int(binomial(n, r))).collect())?;
    HolCurve::new(vec![PolyVector::new(entries)], weights)
}

/// `η̂ = σ̂_0^{⊗k_0} ⊗ … ⊗ σ̂_{p−1}^{⊗k_{p−1}}` as a rank-one curve.
pub fn tensor_lift<F: Scalar>(lift: &PrimitiveLift<F>, k: &[u32]) -> Result<HolCurve<F>> {
    if k.len() != lift.p() {
        return Err(Error::WeightCountMismatch { expected: lift.p(), found: k.len() });
    }
    if k.iter().any(|&e| e == 0) {
        return Err(Error::InvalidInput("tensor exponents must be positive".into()));
    }
    let mut dim: u128 = 1;
    for (s, &e) in lift.sections().iter().zip(k) {
        for _ in 0..e {
            dim = dim.saturating_mul(s.dim() as u128);
        }
    }
    if dim > MAX_TENSOR_DIM {
        return Err(Error::DimensionOverflow(dim));
    }
    let mut eta = PolyVector::new(vec![UniPoly::one()]);
    let mut metric = DiagonalMetric::identity(1);
    for (j, (s, &e)) in lift.sections().iter().zip(k).enumerate() {
        let m = lift.section_metric(j)?;
        for _ in 0..e {
            eta = eta.kron(s);
            metric = metric.tensor(m);
        }
    }
    HolCurve::new(vec![eta], metric)
}

/// `β = c·|h|²·Q^N` with `c > 0`, `h` monic and `Q` the certificate's
/// quadric, `1 + zz̄` unless a Möbius change of coordinate was needed.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelCertificate {
    pub quadric: ExactPoly,
    pub exponent: u32,
    pub constant: BigRational,
    pub factor: HolPoly,
}

impl LevelCertificate {
    pub fn reconstruct(&self) -> ExactPoly {
        self.factor.norm_sq().scale(&GaussianRational::real(self.constant.clone())) * self.quadric.pow(self.exponent)
    }
}

/// Strips the largest power of `1 + zz̄` from β and tests whether the rest
/// is a Hermitian norm square.
pub fn factor_certificate(beta: &ExactPoly) -> Result<Option<LevelCertificate>> {
    factor_certificate_over(beta, &one_plus_zzbar())
}

/// [`factor_certificate`] with `1 + zz̄` replaced by a quadric `Q`.
pub fn factor_certificate_over(beta: &ExactPoly, quadric: &ExactPoly) -> Result<Option<LevelCertificate>> {
    if !beta.is_real() {
        return Err(Error::NotReal);
    }
    let (exponent, rest) = factor_out(beta, quadric)?;
    let Some((constant, factor)) = norm_square_factor(&rest)? else {
        return Ok(None);
    };
    let cert = LevelCertificate { quadric: quadric.clone(), exponent, constant, factor };
    assert_eq!(&cert.reconstruct(), beta, "certificate must reconstruct β");
    Ok(Some(cert))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// Every β_j is `c_j (1+zz̄)^{α_j}`.
    ConstantCurvatureAllMetrics { alphas: Vec<u32> },
    /// Every β_j is `c_j |h_j|² (1+zz̄)^{N_j}`, some `h_j` nonconstant.
    LocallyVeronese { factors: Vec<HolPoly> },
    /// Factorization fails at this level.
    NotConstant { level: usize },
    /// Factorization fails, yet the curvature is constant for the probe
    /// weights at this index. Contradicts the classification; never expected.
    InconclusiveAlarm { level: usize, probe: usize },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ConstantCurvatureAllMetrics { alphas } => {
                let a: Vec<String> = alphas.iter().map(u32::to_string).collect();
                write!(f, "CONSTANT_CURVATURE_ALL_METRICS({})", a.join(", "))
            }
            Self::LocallyVeronese { factors } => {
                let h: Vec<String> = factors.iter().map(|h| h.to_herm().to_string()).collect();
                write!(f, "LOCALLY_VERONESE({})", h.join("; "))
            }
            Self::NotConstant { .. } => write!(f, "NOT_CONSTANT"),
            Self::InconclusiveAlarm { .. } => write!(f, "INCONCLUSIVE-ALARM"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CongruenceCertificate {
    pub levels: Vec<Option<LevelCertificate>>,
    pub verdict: Verdict,
}

/// Weights tried when factorization fails, to detect a constant curvature
/// the certificate missed: all ones, then `1, 2, …, p`.
pub fn probe_weights(p: usize) -> Vec<InvariantMetric> {
    vec![
        InvariantMetric::unit(p),
        InvariantMetric::Exact((1..=p).map(int).collect()),
    ]
}

/// The quadric `Q = zz̄ + Bz + B̄z̄ + C` with `C > |B|²` when `γ = c/Q²`.
/// Such a `Q` is `|az+b|² + |cz+d|²` up to scale, so `γ` is the round
/// metric pulled back by a Möbius map.
pub fn adapted_quadric(gamma: &ExactRationalFn) -> Option<ExactPoly> {
    let c = gamma.num().is_constant().then(|| gamma.num().coeff(Monomial { z: 0, zbar: 0 }).cloned()).flatten()?;
    if c.im != BigRational::from_integer(0.into()) || c.re <= BigRational::from_integer(0.into()) {
        return None;
    }
    let den = gamma.den();
    let top = den.coeff(Monomial { z: 2, zbar: 2 })?;
    let coeff = |z, zbar| den.coeff(Monomial { z, zbar }).cloned().unwrap_or_else(GaussianRational::zero);
    let half = GaussianRational::real(BigRational::new(1.into(), 2.into()));
    let inv = top.inv();
    let b = coeff(2, 1) * inv.clone() * half.clone();
    let c0 = (coeff(1, 1) * inv - b.clone() * b.conj() * GaussianRational::from_ints(2, 0)) * half;
    let q = ExactPoly::monomial(GaussianRational::from_ints(1, 0), 1, 1)
        + ExactPoly::monomial(b.clone(), 1, 0)
        + ExactPoly::monomial(b.conj(), 0, 1)
        + ExactPoly::monomial(c0.clone(), 0, 0);
    let norm_b = (b.clone() * b.conj()).re;
    if !c0.im.is_zero() || c0.re <= norm_b {
        return None;
    }
    (q.pow(2).scale(top) == *den).then_some(q)
}

/// Finite-difference curvature at a few points, spread beyond `1e-4`.
fn visibly_nonconstant(rho: &ExactRationalFn) -> Result<bool> {
    let f = rho.to_float();
    let density = |z: Complex64| f.eval(z).map(|v| v.re).unwrap_or(f64::NAN);
    let mut ks = Vec::new();
    for z in [(0.3, 0.1), (-0.7, 0.4), (1.3, -0.9), (0.05, -1.7)] {
        let z = Complex64::new(z.0, z.1);
        ks.push(-2.0 * fd_mixed_log(density, z, 1e-3)? / density(z));
    }
    let lo = ks.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ks.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(hi - lo > 1e-4 * (1.0 + hi.abs()))
}

fn certify_over(betas: &[ExactPoly], quadric: &ExactPoly) -> Result<Vec<Option<LevelCertificate>>> {
    betas.iter().map(|b| factor_certificate_over(b, quadric)).collect()
}

/// Certificate for a list of β_j. If factorization over `1 + zz̄` fails it
/// is retried over the quadric adapted to γ_0; if that fails too, the
/// curvature of `Σ λ_j ∂∂̄ log β_j` is tested for each probe metric.
pub fn certify_betas(betas: &[ExactPoly], probes: &[InvariantMetric]) -> Result<CongruenceCertificate> {
    let mut levels = certify_over(betas, &one_plus_zzbar())?;
    if let Some(level) = levels.iter().position(Option::is_none) {
        let gammas = betas.iter().map(laplace_log).collect::<Result<Vec<_>>>()?;
        if let Some(q) = gammas.first().and_then(adapted_quadric) {
            let retry = certify_over(betas, &q)?;
            if retry.iter().all(Option::is_some) {
                levels = retry;
                return Ok(CongruenceCertificate { verdict: verdict_of(&levels), levels });
            }
        }
        for (probe, m) in probes.iter().enumerate() {
            let InvariantMetric::Exact(w) = m else { continue };
            if w.len() != gammas.len() {
                return Err(Error::WeightCountMismatch { expected: gammas.len(), found: w.len() });
            }
            let rho = gammas
                .iter()
                .zip(w)
                .fold(RationalFn::zero(), |acc, (g, l)| &acc + &g.scale(&GaussianRational::real(l.clone())));
            if visibly_nonconstant(&rho)? {
                continue;
            }
            let k = curvature(&MetricDensity::new(rho)?)?;
            if constant_value(&k).is_some() {
                return Ok(CongruenceCertificate { levels, verdict: Verdict::InconclusiveAlarm { level, probe } });
            }
        }
        return Ok(CongruenceCertificate { levels, verdict: Verdict::NotConstant { level } });
    }
    Ok(CongruenceCertificate { verdict: verdict_of(&levels), levels })
}

fn verdict_of(levels: &[Option<LevelCertificate>]) -> Verdict {
    let certs: Vec<&LevelCertificate> = levels.iter().flatten().collect();
    if certs.iter().all(|c| c.factor.is_constant()) {
        Verdict::ConstantCurvatureAllMetrics { alphas: certs.iter().map(|c| c.exponent).collect() }
    } else {
        Verdict::LocallyVeronese { factors: certs.iter().map(|c| c.factor.clone()).collect() }
    }
}

/// Certificate for an exact lift, probing with [`probe_weights`].
pub fn congruence_test(lift: &PrimitiveLift<GaussianRational>) -> Result<CongruenceCertificate> {
    certify_betas(lift.betas(), &probe_weights(lift.p()))
}
