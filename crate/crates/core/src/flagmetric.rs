//! Degrees, areas and the area-maximizing invariant metric.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::curves::PrimitiveLift;
use crate::error::{Error, Result};
use crate::geometry::{InvariantMetric, PointEvaluator};
use crate::oracle::quadrature_degree;
use crate::scalar::{rat_to_f64, Scalar};

/// Tolerance of the quadrature behind float-backend degrees.
const QUADRATURE_TOL: f64 = 1e-8;

/// Degrees δ_0, …, δ_{p−1} of the curves ι∘ψ⁽ʲ⁾.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegreeVector(Vec<u64>);

impl DegreeVector {
    pub fn new(d: Vec<u64>) -> Self {
        Self(d)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm_sq(&self) -> u64 {
        self.0.iter().map(|d| d * d).sum()
    }

    pub fn norm(&self) -> f64 {
        (self.norm_sq() as f64).sqrt()
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `(1/π)∬ γ_j dx dy`, the analytic degree, by quadrature.
pub fn quadrature_estimate<F: Scalar>(lift: &PrimitiveLift<F>, j: usize, tol: f64) -> Result<f64> {
    lift.gamma(j)?;
    let ev = PointEvaluator::new(lift);
    quadrature_degree(|z| ev.gamma(j, z), tol)
}

/// δ_j. Exact lifts: the largest component degree of the coprime section
/// σ̂_j. Float lifts: the quadrature estimate, which must lie within 0.25
/// of an integer.
pub fn degree<F: Scalar>(lift: &PrimitiveLift<F>, j: usize) -> Result<u64> {
    let s = lift.sections().get(j).ok_or(Error::IndexOutOfRange { index: j, bound: lift.p() })?;
    if F::EXACT {
        return Ok(s.max_degree().unwrap_or(0) as u64);
    }
    let est = quadrature_estimate(lift, j, QUADRATURE_TOL)?;
    let rounded = est.round();
    if (est - rounded).abs() >= 0.25 || rounded < 0.0 {
        return Err(Error::NoConvergence { estimate: est, error: (est - rounded).abs() });
    }
    Ok(rounded as u64)
}

pub fn degrees<F: Scalar>(lift: &PrimitiveLift<F>) -> Result<DegreeVector> {
    (0..lift.p()).map(|j| degree(lift, j)).collect::<Result<_>>().map(DegreeVector)
}

/// Area divided by π.
#[derive(Clone, Debug, PartialEq)]
pub enum AreaValue {
    Exact(BigRational),
    Float(f64),
}

impl AreaValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            Self::Exact(q) => rat_to_f64(q),
            Self::Float(x) => *x,
        }
    }
}

/// `A(Ψ) = π Σ λ_j δ_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct AreaReport {
    pub weights: InvariantMetric,
    pub degrees: DegreeVector,
    pub area_over_pi: AreaValue,
    /// Whether the weights are the maximizer `δ/‖δ‖` (to `1e-10`).
    pub maximizer: bool,
}

impl AreaReport {
    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.area_over_pi.to_f64()
    }
}

impl fmt::Display for AreaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.area_over_pi {
            AreaValue::Exact(q) => write!(f, "{q}π")?,
            AreaValue::Float(x) => write!(f, "{x}π")?,
        }
        if self.maximizer {
            write!(f, " (maximal)")?;
        }
        Ok(())
    }
}

pub fn area<F: Scalar>(lift: &PrimitiveLift<F>, m: &InvariantMetric) -> Result<AreaReport> {
    if !lift.compact() {
        return Err(Error::NonCompactDomain);
    }
    if m.len() != lift.p() {
        return Err(Error::WeightCountMismatch { expected: lift.p(), found: m.len() });
    }
    let degrees = degrees(lift)?;
    let area_over_pi = match m {
        InvariantMetric::Exact(w) => AreaValue::Exact(
            w.iter()
                .zip(degrees.as_slice())
                .map(|(l, &d)| l * BigRational::from_integer(BigInt::from(d)))
                .fold(BigRational::zero(), |a, b| a + b),
        ),
        InvariantMetric::Float(w) => {
            AreaValue::Float(w.iter().zip(degrees.as_slice()).map(|(l, &d)| l * d as f64).sum())
        }
    };
    let maximizer = maximize_area(&degrees).is_ok_and(|opt| {
        m.to_f64().iter().zip(&opt.weights).all(|(a, b)| (a - b).abs() <= 1e-10)
    });
    Ok(AreaReport { weights: m.clone(), degrees, area_over_pi, maximizer })
}

/// The maximizer of `Σ λ_j δ_j` on the sphere `Σ λ_j² = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Maximizer {
    /// δ divided by the gcd of its entries.
    pub direction: Vec<u64>,
    /// `‖direction‖²`; the weights are `direction / √norm_sq`.
    pub norm_sq: u64,
    pub weights: Vec<f64>,
    /// `‖δ‖`, the maximal area divided by π.
    pub max_area_over_pi: f64,
}

impl Maximizer {
    pub fn metric(&self) -> Result<InvariantMetric> {
        InvariantMetric::float(self.weights.clone())
    }
}

/// λ* = δ/‖δ‖ (Cauchy–Schwarz; unique since the constraint set is a sphere).
pub fn maximize_area(delta: &DegreeVector) -> Result<Maximizer> {
    if delta.as_slice().iter().all(|&d| d == 0) {
        return Err(Error::ZeroDegrees);
    }
    let g = delta.as_slice().iter().fold(0u64, |g, &d| g.gcd(&d));
    let direction: Vec<u64> = delta.as_slice().iter().map(|d| d / g).collect();
    let norm_sq: u64 = direction.iter().map(|d| d * d).sum();
    let norm = (norm_sq as f64).sqrt();
    let weights = direction.iter().map(|&d| d as f64 / norm).collect();
    let max_area_over_pi = delta.norm();
    Ok(Maximizer { direction, norm_sq, weights, max_area_over_pi })
}
