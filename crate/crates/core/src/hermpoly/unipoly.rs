use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{HermPoly, Monomial};
use crate::scalar::{Complex64, Scalar};

/// Dense polynomial in `z` alone (holomorphic). Trailing zeros are trimmed,
/// so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq)]
pub struct UniPoly<F> {
    coeffs: Vec<F>,
}

impl<F: Scalar> UniPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// `c · z^d`
    pub fn monomial(c: F, d: usize) -> Self {
        let mut v = vec![F::zero(); d + 1];
        v[d] = c;
        Self::new(v)
    }

    pub fn z() -> Self {
        Self::monomial(F::one(), 1)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> F {
        self.coeffs.get(d).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.mul_ref(c)).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul_ref(&F::from_i64(k as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, z: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| {
            let mut t = acc.mul_ref(z);
            t.add_assign_ref(c);
            t
        })
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_c64())
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = F::one() / l.clone();
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division over the coefficient field.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = F::one() / d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].mul_ref(&inv);
            if c.is_zero() {
                continue;
            }
            for (j, b) in d.coeffs.iter().enumerate() {
                let t = b.mul_ref(&c);
                rem[k + j].sub_assign_ref(&t);
            }
            rem[k + dd] = F::zero();
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Same polynomial as an element of ℂ[z, z̄].
    pub fn to_herm(&self) -> HermPoly<F> {
        HermPoly::from_terms(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (Monomial::new(k as u32, 0), c.clone())),
        )
    }

    /// `conj(p(z))` as a polynomial in `z̄`.
    pub fn conj_herm(&self) -> HermPoly<F> {
        HermPoly::from_terms(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (Monomial::new(0, k as u32), c.conj())),
        )
    }

    /// `|p(z)|²` in ℂ[z, z̄].
    pub fn norm_sq(&self) -> HermPoly<F> {
        let mut terms = Vec::with_capacity(self.coeffs.len() * self.coeffs.len());
        for (a, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in self.coeffs.iter().enumerate() {
                terms.push((Monomial::new(a as u32, b as u32), ca.mul_ref(&cb.conj())));
            }
        }
        HermPoly::from_terms(terms)
    }

    pub fn map_coeffs<G: Scalar>(&self, f: impl Fn(&F) -> G) -> UniPoly<G> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn to_float(&self) -> UniPoly<Complex64> {
        self.map_coeffs(|c| c.to_c64())
    }
}

/// Monic greatest common divisor over the coefficient field (Euclid).
/// Returns zero only when both inputs are zero.
pub fn gcd_univariate<F: Scalar>(p: &UniPoly<F>, q: &UniPoly<F>) -> UniPoly<F> {
    let (mut a, mut b) = (p.clone(), q.clone());
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b);
        a = b;
        b = r.monic();
    }
    a.monic()
}

impl<F: Scalar> fmt::Debug for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_herm(), f)
    }
}

impl<F: Scalar> fmt::Display for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_herm(), f)
    }
}

impl<F: Scalar> Zero for UniPoly<F> {
    fn zero() -> Self {
        UniPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<F: Scalar> One for UniPoly<F> {
    fn one() -> Self {
        UniPoly::one()
    }
}

impl<F: Scalar> Neg for UniPoly<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<F: Scalar> Add<&UniPoly<F>> for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn add(self, rhs: &UniPoly<F>) -> UniPoly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<F: Scalar> Sub<&UniPoly<F>> for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn sub(self, rhs: &UniPoly<F>) -> UniPoly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<F: Scalar> Mul<&UniPoly<F>> for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn mul(self, rhs: &UniPoly<F>) -> UniPoly<F> {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = a.mul_ref(b);
                out[i + j].add_assign_ref(&t);
            }
        }
        UniPoly::new(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<F: Scalar> $tr for UniPoly<F> {
            type Output = UniPoly<F>;
            fn $m(self, rhs: UniPoly<F>) -> UniPoly<F> {
                (&self).$m(&rhs)
            }
        }
        impl<F: Scalar> $tr<&UniPoly<F>> for UniPoly<F> {
            type Output = UniPoly<F>;
            fn $m(self, rhs: &UniPoly<F>) -> UniPoly<F> {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
