//! Induced metrics of primitive lifts under invariant metrics, Gaussian
//! curvature, Kähler angles and constancy tests.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::curves::PrimitiveLift;
use crate::error::{Error, Result};
use crate::hermpoly::{laplace_log, one_plus_zzbar, HermPoly, RationalFn, Var};
use crate::oracle::GridSpec;
use crate::scalar::{rat_to_f64, Complex64, Scalar};

/// Weights λ_j = λ_{j,j+1} of a `U(n)`-invariant metric on a flag manifold.
#[derive(Clone, Debug, PartialEq)]
pub enum InvariantMetric {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

impl InvariantMetric {
    pub fn exact(weights: Vec<BigRational>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::NonPositiveWeight);
        }
        Ok(Self::Exact(weights))
    }

    pub fn float(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::NonPositiveWeight);
        }
        Ok(Self::Float(weights))
    }

    /// All weights equal to one.
    pub fn unit(p: usize) -> Self {
        Self::Exact(vec![BigRational::from_integer(1.into()); p])
    }

    pub fn len(&self) -> usize {
        match self {
            Self::Exact(w) => w.len(),
            Self::Float(w) => w.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Exact(_))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Self::Exact(w) => w.iter().map(rat_to_f64).collect(),
            Self::Float(w) => w.clone(),
        }
    }

    fn coefficients<F: Scalar>(&self) -> Result<Vec<F>> {
        match self {
            Self::Exact(w) => Ok(w.iter().map(F::from_rational).collect()),
            Self::Float(w) => w
                .iter()
                .map(|&x| F::from_f64(x))
                .collect::<Option<Vec<F>>>()
                .ok_or_else(|| Error::InvalidInput("float weights need the float backend".into())),
        }
    }
}

/// The coefficient ρ of `Ψ*g = ρ dz dz̄`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricDensity<F: Scalar> {
    rho: RationalFn<F>,
}

impl<F: Scalar> MetricDensity<F> {
    /// Checks that ρ is real and positive at ten sample points.
    pub fn new(rho: RationalFn<F>) -> Result<Self> {
        if rho.is_zero() {
            return Err(Error::ZeroMetric);
        }
        if !rho.is_real() {
            return Err(Error::NotReal);
        }
        for k in 0..10 {
            let t = k as f64;
            let z = Complex64::from_polar(0.15 + 0.35 * t, 0.7 + 2.3 * t);
            match rho.eval(z) {
                Ok(v) if v.re <= 0.0 => return Err(Error::NonPositive),
                _ => {}
            }
        }
        Ok(Self { rho })
    }

    pub fn rho(&self) -> &RationalFn<F> {
        &self.rho
    }

    pub fn is_exact(&self) -> bool {
        F::EXACT
    }

    pub fn scale(&self, c: &F) -> Self {
        Self { rho: self.rho.scale(c) }
    }
}

/// γ_j = ∂∂̄ log β_j of a lift.
pub fn gamma<F: Scalar>(lift: &PrimitiveLift<F>, j: usize) -> Result<RationalFn<F>> {
    lift.gamma(j).cloned()
}

/// ρ = Σ λ_j γ_j.
pub fn induced_metric<F: Scalar>(lift: &PrimitiveLift<F>, m: &InvariantMetric) -> Result<MetricDensity<F>> {
    if m.len() != lift.p() {
        return Err(Error::WeightCountMismatch { expected: lift.p(), found: m.len() });
    }
    let weights = m.coefficients::<F>()?;
    let rho = lift
        .gammas()
        .iter()
        .zip(&weights)
        .fold(RationalFn::zero(), |acc, (g, w)| &acc + &g.scale(w));
    MetricDensity::new(rho)
}

/// Metric induced on the single term ψ_j (viewed in its Grassmannian)
/// by its Fubini–Study/Plücker metric: γ_{j−1} + γ_j, where γ_{−1} = γ_p = 0.
pub fn level_density<F: Scalar>(lift: &PrimitiveLift<F>, j: usize) -> Result<MetricDensity<F>> {
    if j > lift.p() {
        return Err(Error::IndexOutOfRange { index: j, bound: lift.p() + 1 });
    }
    let prev = if j > 0 { lift.gamma(j - 1)?.clone() } else { RationalFn::zero() };
    let cur = if j < lift.p() { lift.gamma(j)?.clone() } else { RationalFn::zero() };
    MetricDensity::new(&prev + &cur)
}

/// Gaussian curvature `K = −(2/ρ) ∂∂̄ log ρ`.
pub fn curvature<F: Scalar>(rho: &MetricDensity<F>) -> Result<RationalFn<F>> {
    let r = rho.rho();
    if r.is_zero() {
        return Err(Error::ZeroMetric);
    }
    let lap = &laplace_log(r.num())? - &laplace_log(r.den())?;
    let inv = RationalFn::new(r.den().clone(), r.num().clone())?;
    Ok((&lap * &inv).scale(&F::from_i64(-2)))
}

/// `Some(c)` iff `f` is the constant `c`. Exact functions are compared
/// symbolically; float functions by the spread of their values on the
/// 64×8 constancy grid (at most `1e-8`).
pub fn constant_value<F: Scalar>(f: &RationalFn<F>) -> Option<F> {
    if F::EXACT {
        return f.as_constant();
    }
    let grid = GridSpec::constancy();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut sum = Complex64::zero();
    let mut count = 0usize;
    for (phi, theta) in grid.points() {
        let v = latitude_eval(f, phi, theta).ok()?;
        lo = lo.min(v.re);
        hi = hi.max(v.re);
        if v.im.abs() > 1e-8 {
            return None;
        }
        sum += v;
        count += 1;
    }
    (hi - lo <= 1e-8).then(|| F::from_f64(sum.re / count as f64).expect("float field"))
}

/// `tan²(θ_j/2) = γ_{j−1}/γ_j`; identically zero at `j = 0`.
pub fn kahler_tan_sq<F: Scalar>(lift: &PrimitiveLift<F>, j: usize) -> Result<RationalFn<F>> {
    if j == 0 {
        return Ok(RationalFn::zero());
    }
    if j >= lift.p() {
        return Err(Error::IndexOutOfRange { index: j, bound: lift.p() });
    }
    lift.gamma(j - 1)?.checked_div(lift.gamma(j)?)
}

/// The α_j with γ_j = α_j/(1 + z z̄)² for every j, if such constants exist.
pub fn per_level_constancy<F: Scalar>(lift: &PrimitiveLift<F>) -> Option<Vec<F>> {
    let s = RationalFn::from_poly(one_plus_zzbar::<F>().pow(2));
    lift.gammas().iter().map(|g| constant_value(&(g * &s))).collect()
}

/// `f(cot(φ/2)·e^{iϑ})`.
pub fn latitude_eval<F: Scalar>(f: &RationalFn<F>, phi: f64, theta: f64) -> Result<Complex64> {
    if !(phi > 0.0 && phi < std::f64::consts::PI) {
        return Err(Error::InvalidInput(format!("latitude {phi} outside (0, π)")));
    }
    f.eval(latitude_point(phi, theta))
}

pub fn latitude_point(phi: f64, theta: f64) -> Complex64 {
    Complex64::from_polar(1.0 / (phi / 2.0).tan(), theta)
}

/// Value and first derivatives of γ_j = N/β² at a point, from symbolic
/// derivatives of `N = β ∂∂̄β − ∂β ∂̄β` and β.
#[derive(Clone, Debug)]
struct GammaJet {
    n: [HermPoly<Complex64>; 4],
    b: [HermPoly<Complex64>; 4],
}

fn partials<F: Scalar>(p: &HermPoly<F>) -> [HermPoly<Complex64>; 4] {
    let pz = p.diff(Var::Z);
    let pzb = p.diff(Var::Zbar);
    let pzzb = pz.diff(Var::Zbar);
    [p.to_float(), pz.to_float(), pzb.to_float(), pzzb.to_float()]
}

impl GammaJet {
    fn new<F: Scalar>(beta: &HermPoly<F>) -> Self {
        let bz = beta.diff(Var::Z);
        let bzb = beta.diff(Var::Zbar);
        let n = beta * &bz.diff(Var::Zbar) - &bz * &bzb;
        Self { n: partials(&n), b: partials(beta) }
    }

    /// `[g, g_z, g_z̄, g_zz̄]`.
    fn eval(&self, z: Complex64) -> Result<[Complex64; 4]> {
        let [n, nz, nzb, nzzb] = [0, 1, 2, 3].map(|k| self.n[k].eval(z));
        let [b, bz, bzb, bzzb] = [0, 1, 2, 3].map(|k| self.b[k].eval(z));
        if b.norm() < 1e-300 {
            return Err(Error::PoleHit);
        }
        // scale by β's magnitude to keep large |z| in range
        let (bz, bzb, bzzb) = (bz / b, bzb / b, bzzb / b);
        let (n, nz, nzb, nzzb) = (n / (b * b), nz / (b * b), nzb / (b * b), nzzb / (b * b));
        let g = n;
        let gz = nz - 2.0 * n * bz;
        let gzb = nzb - 2.0 * n * bzb;
        let gzzb = nzzb - 2.0 * nz * bzb - 2.0 * nzb * bz - 2.0 * n * bzzb + 6.0 * n * bz * bzb;
        Ok([g, gz, gzb, gzzb])
    }
}

/// Pointwise evaluation of γ_j and curvatures of a lift in double
/// precision, without expanding Σλ_jγ_j symbolically.
#[derive(Clone, Debug)]
pub struct PointEvaluator {
    jets: Vec<GammaJet>,
}

impl PointEvaluator {
    pub fn new<F: Scalar>(lift: &PrimitiveLift<F>) -> Self {
        Self { jets: lift.betas().iter().map(GammaJet::new).collect() }
    }

    pub fn p(&self) -> usize {
        self.jets.len()
    }

    pub fn gamma(&self, j: usize, z: Complex64) -> Result<f64> {
        let jet = self.jets.get(j).ok_or(Error::IndexOutOfRange { index: j, bound: self.p() })?;
        Ok(jet.eval(z)?[0].re)
    }

    /// Curvature of `ρ = Σ w_j γ_j` at `z`; weights may be zero.
    pub fn curvature_with(&self, weights: &[f64], z: Complex64) -> Result<f64> {
        if weights.len() != self.p() {
            return Err(Error::WeightCountMismatch { expected: self.p(), found: weights.len() });
        }
        let mut r = [Complex64::zero(); 4];
        for (jet, &w) in self.jets.iter().zip(weights) {
            if w == 0.0 {
                continue;
            }
            let v = jet.eval(z)?;
            for k in 0..4 {
                r[k] += w * v[k];
            }
        }
        let rho = r[0].re;
        if rho <= 0.0 {
            return Err(Error::ZeroMetric);
        }
        let lap = (r[0] * r[3] - r[1] * r[2]).re / (rho * rho);
        Ok(-2.0 * lap / rho)
    }

    pub fn curvature(&self, m: &InvariantMetric, z: Complex64) -> Result<f64> {
        self.curvature_with(&m.to_f64(), z)
    }

    /// Curvature of the single term ψ_j, metric γ_{j−1} + γ_j.
    pub fn level_curvature(&self, j: usize, z: Complex64) -> Result<f64> {
        let p = self.p();
        if j > p {
            return Err(Error::IndexOutOfRange { index: j, bound: p + 1 });
        }
        let w: Vec<f64> = (0..p).map(|i| if i + 1 == j || i == j { 1.0 } else { 0.0 }).collect();
        self.curvature_with(&w, z)
    }
}
