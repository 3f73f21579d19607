use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{HermPoly, Monomial, RationalFn, UniPoly, Var};
use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Scalar};

/// `1 + z z̄`, the norm square of the affine Veronese section `(1, z)`.
pub fn one_plus_zzbar<F: Scalar>() -> HermPoly<F> {
    HermPoly::from_terms([(Monomial::ONE, F::one()), (Monomial::new(1, 1), F::one())])
}

/// `∂²/∂z∂z̄ log β = (β·∂∂̄β − ∂β·∂̄β) / β²` for a real nonzero `β`.
pub fn laplace_log<F: Scalar>(beta: &HermPoly<F>) -> Result<RationalFn<F>> {
    if beta.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !beta.is_real() {
        return Err(Error::NotReal);
    }
    let dz = beta.diff(Var::Z);
    let dzbar = beta.diff(Var::Zbar);
    let mixed = dz.diff(Var::Zbar);
    let num = beta * &mixed - &dz * &dzbar;
    let den = beta * beta;
    let mut factors = Vec::new();
    if F::EXACT && !beta.is_constant() {
        factors.push(beta.clone());
        let (m, rest) = factor_out(beta, &one_plus_zzbar())?;
        if m > 0 && !rest.is_constant() {
            factors.push(rest);
        }
    }
    RationalFn::with_factors(num, den, &factors)
}

/// Largest `m` with `q^m | p`, together with the cofactor `p / q^m`.
pub fn factor_out<F: Scalar>(p: &HermPoly<F>, q: &HermPoly<F>) -> Result<(u32, HermPoly<F>)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if q.is_constant() {
        return Err(Error::InvalidInput("factor_out needs a nonconstant divisor".into()));
    }
    let mut m = 0;
    let mut rest = p.clone();
    while let Some(next) = rest.div_exact(q) {
        m += 1;
        rest = next;
    }
    Ok((m, rest))
}

/// Decides whether a real polynomial is `c·|h(z)|²` with `c > 0` and `h`
/// monic, by testing whether its Hermitian coefficient matrix
/// `P = Σ C_ab z^a z̄^b` is positive semidefinite of rank one.
pub fn norm_square_factor(
    p: &HermPoly<GaussianRational>,
) -> Result<Option<(BigRational, UniPoly<GaussianRational>)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_real() {
        return Err(Error::NotReal);
    }
    // For a rank-one PSD matrix C = c·h·h*, the last nonzero diagonal entry
    // sits at the degree of h and equals c (h monic).
    let d = p.degree_z().max(p.degree_zbar());
    let pivot = (0..=d).rev().find(|&a| p.coeff(Monomial::new(a, a)).is_some());
    let Some(pivot) = pivot else {
        return Ok(None);
    };
    let c = p.coeff(Monomial::new(pivot, pivot)).expect("pivot").clone();
    if !c.is_real() || !c.re.is_positive() {
        return Ok(None);
    }
    let inv = c.inv();
    let h = UniPoly::new(
        (0..=pivot)
            .map(|a| p.coeff(Monomial::new(a, pivot)).cloned().unwrap_or_else(GaussianRational::zero).mul_ref(&inv))
            .collect(),
    );
    debug_assert!(h.leading().is_some_and(|l| l.is_one()));
    if h.norm_sq().scale(&c) == *p {
        Ok(Some((c.re, h)))
    } else {
        Ok(None)
    }
}

impl UniPoly<GaussianRational> {
    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| *c == GaussianRational::one())
    }
}
