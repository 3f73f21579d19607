//! Harmonic sequences of holomorphic curves in complex Grassmannians, their
//! primitive lifts into flag manifolds, and the metric invariants of those
//! lifts under `U(n)`-invariant metrics: the densities γ_j, induced metrics,
//! Gaussian curvature, Kähler angles, degrees and areas, the area-maximizing
//! weights, and an exact certificate for constant curvature.
//!
//! Polynomial and rational-function types are generic over [`Scalar`]; the
//! aliases below name the two instantiations used throughout.

pub mod cli;
pub mod curves;
pub mod error;
pub mod exterior;
pub mod flagmetric;
pub mod geometry;
pub mod hermpoly;
pub mod oracle;
pub mod scalar;
pub mod veronese;

pub use error::{Error, Result};
pub use scalar::{Complex64, GaussianRational, Scalar};

/// Exact polynomial in ℂ[z, z̄] over ℚ(i).
pub type ExactPoly = hermpoly::HermPoly<GaussianRational>;
/// Polynomial in ℂ[z, z̄] with double-precision coefficients.
pub type FloatPoly = hermpoly::HermPoly<Complex64>;
/// Exact holomorphic polynomial in ℚ(i)[z].
pub type HolPoly = hermpoly::UniPoly<GaussianRational>;
/// Holomorphic polynomial with double-precision coefficients.
pub type FloatHolPoly = hermpoly::UniPoly<Complex64>;
/// Exact rational function.
pub type ExactRationalFn = hermpoly::RationalFn<GaussianRational>;
/// Rational function with double-precision coefficients.
pub type FloatRationalFn = hermpoly::RationalFn<Complex64>;
/// Primitive lift computed in exact arithmetic.
pub type ExactLift = curves::PrimitiveLift<GaussianRational>;
/// Primitive lift computed in floating point.
pub type FloatLift = curves::PrimitiveLift<Complex64>;
