//! Floating-point cross-checks and the float curve backend.
//!
//! Everything here is computed independently of the symbolic pipeline:
//! finite differences of `log β`, quadrature of γ over the plane, and
//! pointwise projections built from QR factorizations of derivative frames.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::curves::PrimitiveLift;
use crate::error::{Error, Result};
use crate::exterior::{wedge, DiagonalMetric, PolyVector};
use crate::hermpoly::UniPoly;
use crate::scalar::{rat_to_f64, Complex64};

/// Relative residual at or below which a derivative vector is dependent.
pub const RANK_THRESHOLD: f64 = 1e-9;
/// Residuals strictly inside this band make the rank decision ambiguous.
pub const AMBIGUOUS_BAND: (f64, f64) = (1e-12, 1e-6);
/// Generic point at which float rank decisions are made.
pub const REFERENCE_POINT: Complex64 = Complex64::new(0.37, 0.61);

/// Latitude–phase sample grid `z = cot(φ/2)·e^{iϑ}` avoiding the poles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    phi_count: usize,
    theta_count: usize,
    phi_range: (f64, f64),
}

impl GridSpec {
    /// `phi_count` latitudes uniform in `[π/N, π − π/N]`, `theta_count`
    /// equally spaced phases. That interval is a single point for `N = 2`,
    /// which instead samples `π/3` and `2π/3`.
    pub fn new(phi_count: usize, theta_count: usize) -> Result<Self> {
        let n = phi_count as f64;
        let range = if phi_count == 2 { (PI / 3.0, 2.0 * PI / 3.0) } else { (PI / n, PI - PI / n) };
        Self::with_range(phi_count, theta_count, range)
    }

    pub fn with_range(phi_count: usize, theta_count: usize, phi_range: (f64, f64)) -> Result<Self> {
        if phi_count < 2 || theta_count < 1 {
            return Err(Error::InvalidInput("grid needs at least two latitudes".into()));
        }
        let (a, b) = phi_range;
        if !(a > 0.0 && a < b && b < PI) {
            return Err(Error::InvalidInput(format!("latitude range ({a}, {b}) must lie inside (0, π)")));
        }
        Ok(Self { phi_count, theta_count, phi_range })
    }

    /// The 64×8 grid used for float constancy decisions.
    pub fn constancy() -> Self {
        Self::new(64, 8).expect("valid grid")
    }

    pub fn phis(&self) -> Vec<f64> {
        let (a, b) = self.phi_range;
        let step = (b - a) / (self.phi_count - 1) as f64;
        (0..self.phi_count).map(|i| a + step * i as f64).collect()
    }

    pub fn thetas(&self) -> Vec<f64> {
        (0..self.theta_count).map(|k| 2.0 * PI * k as f64 / self.theta_count as f64).collect()
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        let thetas = self.thetas();
        self.phis().into_iter().flat_map(|p| thetas.iter().map(move |&t| (p, t))).collect()
    }
}

/// `∂²/∂z∂z̄ log β = ¼ Δ log β` by the five-point Laplacian with step `h`.
pub fn fd_mixed_log(beta: impl Fn(Complex64) -> f64, z: Complex64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidInput("step must be positive".into()));
    }
    let log = |w: Complex64| {
        let b = beta(w);
        if b > 0.0 {
            Ok(b.ln())
        } else {
            Err(Error::NonPositive)
        }
    };
    let c = log(z)?;
    let sum = log(z + h)? + log(z - h)? + log(z + Complex64::new(0.0, h))? + log(z - Complex64::new(0.0, h))?;
    Ok((sum - 4.0 * c) / (4.0 * h * h))
}

const GK_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gauss_kronrod(f: &mut impl FnMut(f64) -> Result<f64>, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for (i, (&x, &w)) in GK_NODES.iter().zip(&GK_WEIGHTS).enumerate() {
        let vals = if x == 0.0 { vec![f(c)?] } else { vec![f(c - h * x)?, f(c + h * x)?] };
        let s: f64 = vals.iter().sum();
        kronrod += w * s;
        if i % 2 == 1 {
            gauss += GAUSS_WEIGHTS[i / 2] * s;
        }
    }
    Ok((kronrod * h, (kronrod - gauss).abs() * h))
}

/// Adaptive Gauss–Kronrod (7/15) quadrature on `[a, b]` to absolute error `tol`.
pub fn integrate(mut f: impl FnMut(f64) -> Result<f64>, a: f64, b: f64, tol: f64) -> Result<f64> {
    const BUDGET: usize = 4000;
    let mut intervals = vec![(a, b, gauss_kronrod(&mut f, a, b)?)];
    for _ in 0..BUDGET {
        let (total, err) = intervals.iter().fold((0.0, 0.0), |(t, e), (_, _, (v, d))| (t + v, e + d));
        if err <= tol {
            return Ok(total);
        }
        let worst = (0..intervals.len())
            .max_by(|&i, &j| intervals[i].2 .1.total_cmp(&intervals[j].2 .1))
            .expect("nonempty");
        let (lo, hi, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        intervals.push((lo, mid, gauss_kronrod(&mut f, lo, mid)?));
        intervals.push((mid, hi, gauss_kronrod(&mut f, mid, hi)?));
    }
    let (estimate, error) = intervals.iter().fold((0.0, 0.0), |(t, e), (_, _, (v, d))| (t + v, e + d));
    Err(Error::NoConvergence { estimate, error })
}

/// `(1/π) ∬ γ dx dy` over the plane. With `z = cot(φ/2)·e^{iϑ}` this is
/// `(1/π) ∫₀^π ∫₀^{2π} γ · r · ½csc²(φ/2) dϑ dφ`; the phase integral uses
/// the periodic trapezoid rule (refined until stable), the latitude
/// integral adaptive Gauss–Kronrod.
pub fn quadrature_degree(gamma: impl Fn(Complex64) -> Result<f64>, tol: f64) -> Result<f64> {
    let ring = |phi: f64| -> Result<f64> {
        let r = 1.0 / (phi / 2.0).tan();
        let jac = r * 0.5 / (phi / 2.0).sin().powi(2);
        let mut m = 8;
        let mut prev = f64::NAN;
        loop {
            let mut s = 0.0;
            for k in 0..m {
                let theta = 2.0 * PI * (k as f64 + 0.5) / m as f64;
                s += gamma(Complex64::from_polar(r, theta))?;
            }
            let avg = s / m as f64;
            if (avg - prev).abs() <= 1e-3 * tol * avg.abs().max(1e-300) || m >= 1024 {
                return Ok(avg * 2.0 * PI * jac);
            }
            prev = avg;
            m *= 2;
        }
    };
    Ok(integrate(ring, 0.0, PI, tol * PI)? / PI)
}

/// Holomorphic curve with double-precision coefficients (irrational
/// entries such as √binom allowed).
#[derive(Clone, Debug)]
pub struct FloatCurve {
    frame: Vec<PolyVector<UniPoly<Complex64>>>,
    metric: DiagonalMetric,
}

impl FloatCurve {
    /// Requires the stacked coefficient matrix to have all `n` singular
    /// values above `1e-9` relative to the largest one.
    pub fn new(frame: Vec<PolyVector<UniPoly<Complex64>>>, metric: DiagonalMetric) -> Result<Self> {
        let n = metric.dim();
        if frame.is_empty() {
            return Err(Error::RankDeficient { needed: 1, found: 0 });
        }
        if let Some(v) = frame.iter().find(|v| v.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: v.dim() });
        }
        let c = Self { frame, metric };
        let deg = c.frame.iter().filter_map(PolyVector::max_degree).max().unwrap_or(0);
        let cols = c.frame.len() * (deg + 1);
        let scales = c.coordinate_scales();
        let m = DMatrix::from_fn(n, cols, |i, col| {
            let (v, d) = (col / (deg + 1), col % (deg + 1));
            c.frame[v].entries()[i].coeff(d) * scales[i]
        });
        let sv = m.singular_values();
        let max = sv.max();
        let good = sv.iter().filter(|&&s| s > RANK_THRESHOLD * max).count();
        if cols < n || good < n {
            return Err(Error::RankDeficient { needed: n, found: good.min(n) });
        }
        Ok(c)
    }

    pub fn standard(frame: Vec<PolyVector<UniPoly<Complex64>>>) -> Result<Self> {
        let n = frame.first().map_or(0, PolyVector::dim);
        Self::new(frame, DiagonalMetric::identity(n))
    }

    /// The Veronese curve `(1, √C(n,1) z, …, zⁿ)` in `ℂ^{n+1}`.
    pub fn veronese(n: usize) -> Result<Self> {
        let entries = (0..=n)
            .map(|r| UniPoly::monomial(Complex64::new(binomial_f64(n, r).sqrt(), 0.0), r))
            .collect();
        Self::standard(vec![PolyVector::new(entries)])
    }

    pub fn n(&self) -> usize {
        self.metric.dim()
    }

    pub fn frame(&self) -> &[PolyVector<UniPoly<Complex64>>] {
        &self.frame
    }

    pub fn metric(&self) -> &DiagonalMetric {
        &self.metric
    }

    /// Left multiplication of every frame vector by a matrix.
    pub fn transform(&self, u: &DMatrix<Complex64>) -> Result<Self> {
        let n = self.n();
        if u.nrows() != n || u.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: u.nrows() });
        }
        let frame = self
            .frame
            .iter()
            .map(|v| {
                PolyVector::new(
                    (0..n)
                        .map(|i| {
                            (0..n).fold(UniPoly::zero(), |acc, k| acc + v.entries()[k].scale(&u[(i, k)]))
                        })
                        .collect(),
                )
            })
            .collect();
        Self::new(frame, self.metric.clone())
    }

    fn coordinate_scales(&self) -> Vec<f64> {
        self.metric.weights().iter().map(|w| rat_to_f64(w).sqrt()).collect()
    }

    /// Derivative of order `m` of frame vector `i` at `z`, in orthonormal
    /// coordinates (entries scaled by √weight).
    fn derivative_at(&self, i: usize, m: usize, z: Complex64) -> Vec<Complex64> {
        let scales = self.coordinate_scales();
        self.frame[i]
            .entries()
            .iter()
            .zip(&scales)
            .map(|(p, s)| {
                let mut q = p.clone();
                for _ in 0..m {
                    q = q.derivative();
                }
                q.eval_c64(z) * *s
            })
            .collect()
    }
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Rank structure of the harmonic sequence of a [`FloatCurve`], decided at
/// [`REFERENCE_POINT`], with pointwise evaluators.
#[derive(Clone, Debug)]
pub struct FloatSequence {
    curve: FloatCurve,
    /// Selected `(derivative order, frame index)` pairs in selection order.
    selection: Vec<(usize, usize)>,
    cumulative: Vec<usize>,
}

fn residual_ratio(basis: &[Vec<Complex64>], v: &[Complex64]) -> f64 {
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return 0.0;
    }
    let mut r: Vec<Complex64> = v.to_vec();
    // two passes of Gram-Schmidt for stability
    for _ in 0..2 {
        for q in basis {
            let c: Complex64 = q.iter().zip(&r).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in r.iter_mut().zip(q) {
                *x -= c * y;
            }
        }
    }
    r.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() / norm
}

fn normalized(basis: &[Vec<Complex64>], v: &[Complex64]) -> Vec<Complex64> {
    let mut r = v.to_vec();
    for _ in 0..2 {
        for q in basis {
            let c: Complex64 = q.iter().zip(&r).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in r.iter_mut().zip(q) {
                *x -= c * y;
            }
        }
    }
    let norm = r.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    r.into_iter().map(|c| c / norm).collect()
}

/// Same greedy recipe as the exact backend (derivative order, then frame
/// index), with rank decisions made on relative residuals at a generic point.
pub fn float_harmonic_sequence(c: &FloatCurve) -> Result<FloatSequence> {
    let n = c.n();
    let z = REFERENCE_POINT;
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut selection = Vec::new();
    let mut cumulative = Vec::new();
    for order in 0..n {
        for i in 0..c.frame.len() {
            if basis.len() == n {
                break;
            }
            let v = c.derivative_at(i, order, z);
            let ratio = residual_ratio(&basis, &v);
            if ratio > AMBIGUOUS_BAND.0 && ratio < AMBIGUOUS_BAND.1 {
                return Err(Error::RankAmbiguous(ratio));
            }
            if ratio > RANK_THRESHOLD {
                basis.push(normalized(&basis, &v));
                selection.push((order, i));
            }
        }
        if cumulative.last() == Some(&basis.len()) {
            break;
        }
        cumulative.push(basis.len());
        if basis.len() == n {
            break;
        }
    }
    Ok(FloatSequence { curve: c.clone(), selection, cumulative })
}

impl FloatSequence {
    pub fn ranks(&self) -> Vec<usize> {
        let mut prev = 0;
        self.cumulative
            .iter()
            .map(|&k| {
                let r = k - prev;
                prev = k;
                r
            })
            .collect()
    }

    pub fn cumulative_ranks(&self) -> &[usize] {
        &self.cumulative
    }

    pub fn selection(&self) -> &[(usize, usize)] {
        &self.selection
    }

    /// Number of densities γ_j (terms minus one).
    pub fn p(&self) -> usize {
        self.cumulative.len() - 1
    }

    fn stacked(&self, k: usize, shift: usize, z: Complex64) -> DMatrix<Complex64> {
        let n = self.curve.n();
        let cols: Vec<Vec<Complex64>> = self.selection[..k]
            .iter()
            .map(|&(m, i)| self.curve.derivative_at(i, m + shift, z))
            .collect();
        DMatrix::from_fn(n, k, |r, c| cols[c][r])
    }

    /// Orthonormal frame of ψ_j at `z` (columns).
    pub fn frame_at(&self, j: usize, z: Complex64) -> Result<DMatrix<Complex64>> {
        let hi = *self.cumulative.get(j).ok_or(Error::IndexOutOfRange { index: j, bound: self.cumulative.len() })?;
        let lo = if j == 0 { 0 } else { self.cumulative[j - 1] };
        let q = self.stacked(hi, 0, z).qr().q();
        Ok(q.columns(lo, hi - lo).into_owned())
    }

    /// γ_j(z) = ∂∂̄ log det(S*S) = ‖(I − P) S′ R⁻¹‖²_F, where `S = QR` holds
    /// the selected derivative vectors spanning ψ⁽ʲ⁾ and `S′` their
    /// z-derivatives.
    pub fn gamma_at(&self, j: usize, z: Complex64) -> Result<f64> {
        if j >= self.p() {
            return Err(Error::IndexOutOfRange { index: j, bound: self.p() });
        }
        let k = self.cumulative[j];
        let s = self.stacked(k, 0, z);
        let ds = self.stacked(k, 1, z);
        let qr = s.qr();
        let (q, r) = (qr.q(), qr.r());
        let perp = &ds - &q * (q.adjoint() * &ds);
        let r_inv = r.try_inverse().ok_or(Error::PoleHit)?;
        Ok((perp * r_inv).norm_squared())
    }
}

/// Primitive lift of a float curve: ranks from [`float_harmonic_sequence`],
/// Plücker sections and γ_j in double-precision symbolic form.
pub fn float_lift(c: &FloatCurve) -> Result<PrimitiveLift<Complex64>> {
    let seq = float_harmonic_sequence(c)?;
    let n = c.n();
    let sum: usize = seq.ranks().iter().sum();
    if sum != n {
        return Err(Error::NotAFlag { sum, n });
    }
    let vectors: Vec<PolyVector<UniPoly<Complex64>>> = seq
        .selection
        .iter()
        .map(|&(m, i)| {
            let mut v = c.frame[i].clone();
            for _ in 0..m {
                v = v.derivative();
            }
            v
        })
        .collect();
    let sections = seq.cumulative[..seq.p()]
        .iter()
        .map(|&k| wedge(&vectors[..k], n))
        .collect::<Result<Vec<_>>>()?;
    PrimitiveLift::from_sections(seq.ranks(), c.metric.clone(), sections)
}
