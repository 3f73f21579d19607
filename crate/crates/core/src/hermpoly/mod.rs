//! Exact sparse arithmetic in ℂ[z, z̄], the univariate ring ℂ[z], rational
//! functions over them, and the analytic operators built on top
//! (conjugation, ∂, ∂̄, the mixed log-Laplacian, divisibility and
//! norm-square factorization).

mod analysis;
mod parse;
mod ratfn;
mod unipoly;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{Complex64, Scalar};

pub use analysis::{factor_out, laplace_log, norm_square_factor, one_plus_zzbar};
pub use parse::{parse_hol, parse_hol_float, parse_poly};
pub use ratfn::RationalFn;
pub use unipoly::{gcd_univariate, UniPoly};

/// Per-variable exponent bound. Exceeding it is a hard error.
pub const MAX_EXPONENT: u32 = 1 << 16;

/// Which variable to differentiate by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Z,
    Zbar,
}

/// `z^z · z̄^zbar`, ordered graded-lexicographically (total degree first,
/// then the power of `z`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub z: u32,
    pub zbar: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { z: 0, zbar: 0 };

    pub fn new(z: u32, zbar: u32) -> Self {
        assert!(
            z <= MAX_EXPONENT && zbar <= MAX_EXPONENT,
            "exponent bound 2^16 exceeded"
        );
        Self { z, zbar }
    }

    pub fn degree(&self) -> u32 {
        self.z + self.zbar
    }

    pub fn swap(self) -> Self {
        Self { z: self.zbar, zbar: self.z }
    }

    pub fn mul(self, o: Self) -> Self {
        Self::new(self.z + o.z, self.zbar + o.zbar)
    }

    pub fn divides(&self, o: &Self) -> bool {
        self.z <= o.z && self.zbar <= o.zbar
    }

    fn div(self, o: Self) -> Self {
        Self { z: self.z - o.z, zbar: self.zbar - o.zbar }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree(), self.z).cmp(&(other.degree(), other.z))
    }
}

/// Element of ℂ[z, z̄] with coefficients in `F`. Zero coefficients are never
/// stored.
#[derive(Clone, PartialEq)]
pub struct HermPoly<F> {
    terms: BTreeMap<Monomial, F>,
}

impl<F: Scalar> HermPoly<F> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: F, z: u32, zbar: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::new(z, zbar), c);
        }
        Self { terms }
    }

    pub fn z() -> Self {
        Self::monomial(F::one(), 1, 0)
    }

    pub fn zbar() -> Self {
        Self::monomial(F::one(), 0, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, F)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(Monomial::ONE).is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial::ONE)
    }

    /// Constant value, if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<F> {
        if self.is_zero() {
            return Some(F::zero());
        }
        if self.is_constant() {
            self.coeff(Monomial::ONE).cloned()
        } else {
            None
        }
    }

    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|m| m.zbar == 0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Monomial) -> Option<&F> {
        self.terms.get(&m)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F)> + ExactSizeIterator {
        self.terms.iter()
    }

    /// Highest term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &F)> {
        self.terms.iter().next_back()
    }

    pub fn degree_z(&self) -> u32 {
        self.terms.keys().map(|m| m.z).max().unwrap_or(0)
    }

    pub fn degree_zbar(&self) -> u32 {
        self.terms.keys().map(|m| m.zbar).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Lowest `(z, z̄)` exponents shared by all terms.
    pub fn min_exponents(&self) -> Monomial {
        let z = self.terms.keys().map(|m| m.z).min().unwrap_or(0);
        let zbar = self.terms.keys().map(|m| m.zbar).min().unwrap_or(0);
        Monomial { z, zbar }
    }

    fn add_term(&mut self, m: Monomial, c: &F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                e.add_assign_ref(c);
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (*m, a.mul_ref(c)))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        Self { terms }
    }

    pub fn mul_monomial(&self, c: &F, m: Monomial) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, a)| (k.mul(m), a.mul_ref(c)))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        Self { terms }
    }

    /// Divides every exponent pair by `m` (which must divide every term).
    pub fn div_monomial(&self, m: Monomial) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, a)| {
                assert!(m.divides(k), "monomial does not divide term");
                (k.div(m), a.clone())
            })
            .collect();
        Self { terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Complex conjugation: swaps the exponents of `z` and `z̄` and conjugates
    /// the coefficients.
    pub fn conj(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.swap(), c.conj())).collect();
        Self { terms }
    }

    /// `P == conj(P)` (up to rounding for float coefficients).
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(m, c)| match self.terms.get(&m.swap()) {
            Some(d) => c.near(&d.conj()),
            None => c.near(&F::zero()),
        })
    }

    /// Formal partial derivative by `z` or `z̄`.
    pub fn diff(&self, var: Var) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, dm) = match var {
                Var::Z => (m.z, Monomial { z: m.z.wrapping_sub(1), zbar: m.zbar }),
                Var::Zbar => (m.zbar, Monomial { z: m.z, zbar: m.zbar.wrapping_sub(1) }),
            };
            if e == 0 {
                continue;
            }
            let v = c.mul_ref(&F::from_i64(e as i64));
            if !v.is_zero() {
                terms.insert(dm, v);
            }
        }
        Self { terms }
    }

    /// Evaluates at independent values of `z` and `z̄`.
    pub fn eval_pair(&self, z: &F, w: &F) -> F {
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..m.z {
                t = t.mul_ref(z);
            }
            for _ in 0..m.zbar {
                t = t.mul_ref(w);
            }
            acc.add_assign_ref(&t);
        }
        acc
    }

    /// Floating evaluation with `z̄` bound to the conjugate of `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let w = z.conj();
        let (dz, dw) = (self.degree_z() as usize, self.degree_zbar() as usize);
        let zp = powers(z, dz);
        let wp = powers(w, dw);
        self.terms
            .iter()
            .map(|(m, c)| c.to_c64() * zp[m.z as usize] * wp[m.zbar as usize])
            .sum()
    }

    pub fn map_coeffs<G: Scalar>(&self, f: impl Fn(&F) -> G) -> HermPoly<G> {
        HermPoly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    pub fn to_float(&self) -> HermPoly<Complex64> {
        self.map_coeffs(|c| c.to_c64())
    }

    /// Exact division; `None` when `q` does not divide `self`.
    ///
    /// Single-divisor multivariate division in graded-lex order: the
    /// remainder is zero iff `q | self`, so the first leading term that
    /// `LT(q)` does not divide proves non-divisibility.
    pub fn div_exact(&self, q: &Self) -> Option<Self> {
        assert!(!q.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if q.degree_z() > self.degree_z() || q.degree_zbar() > self.degree_zbar() {
            return None;
        }
        let (lq_m, lq_c) = q.leading().map(|(m, c)| (*m, c.clone()))?;
        if let Some(c) = q.as_constant() {
            return Some(self.scale(&(F::one() / c)));
        }
        let lq_inv = F::one() / lq_c;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((m, c)) = rem.leading().map(|(m, c)| (*m, c.clone())) {
            if !lq_m.divides(&m) {
                return None;
            }
            let qm = m.div(lq_m);
            let qc = c.mul_ref(&lq_inv);
            for (k, a) in &q.terms {
                let t = a.mul_ref(&qc);
                rem.sub_term(k.mul(qm), &t);
            }
            // guard against rounding residue in float mode
            rem.terms.remove(&m);
            quot.add_term(qm, &qc);
        }
        Some(quot)
    }

    fn sub_term(&mut self, m: Monomial, c: &F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                e.sub_assign_ref(c);
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, -c.clone());
            }
        }
    }

    /// Substitutes `z̄ = z` direction-free view: collects the coefficient of
    /// `z^a` among holomorphic terms. `None` if some term contains `z̄`.
    pub fn to_holomorphic(&self) -> Option<UniPoly<F>> {
        if !self.is_holomorphic() {
            return None;
        }
        let d = self.degree_z() as usize;
        let mut coeffs = vec![F::zero(); d + 1];
        for (m, c) in &self.terms {
            coeffs[m.z as usize] = c.clone();
        }
        Some(UniPoly::new(coeffs))
    }

    /// Monomials of the form `(z z̄)^k` only (rotationally symmetric).
    pub fn is_radial(&self) -> bool {
        self.terms.keys().all(|m| m.z == m.zbar)
    }
}

fn powers(x: Complex64, d: usize) -> Vec<Complex64> {
    let mut v = Vec::with_capacity(d + 1);
    let mut p = Complex64::new(1.0, 0.0);
    for _ in 0..=d {
        v.push(p);
        p *= x;
    }
    v
}

impl<F: Scalar> Default for HermPoly<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Scalar> fmt::Debug for HermPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<F: Scalar> Zero for HermPoly<F> {
    fn zero() -> Self {
        HermPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<F: Scalar> One for HermPoly<F> {
    fn one() -> Self {
        HermPoly::one()
    }
}

impl<F: Scalar> Neg for HermPoly<F> {
    type Output = Self;
    fn neg(self) -> Self {
        let terms = self.terms.into_iter().map(|(m, c)| (m, -c)).collect();
        Self { terms }
    }
}

impl<F: Scalar> Neg for &HermPoly<F> {
    type Output = HermPoly<F>;
    fn neg(self) -> HermPoly<F> {
        -(self.clone())
    }
}

impl<F: Scalar> Add<&HermPoly<F>> for &HermPoly<F> {
    type Output = HermPoly<F>;
    fn add(self, rhs: &HermPoly<F>) -> HermPoly<F> {
        let (mut acc, other) = if self.len() >= rhs.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &other.terms {
            acc.add_term(*m, c);
        }
        acc
    }
}

impl<F: Scalar> Sub<&HermPoly<F>> for &HermPoly<F> {
    type Output = HermPoly<F>;
    fn sub(self, rhs: &HermPoly<F>) -> HermPoly<F> {
        let mut acc = self.clone();
        for (m, c) in &rhs.terms {
            acc.sub_term(*m, c);
        }
        acc
    }
}

impl<F: Scalar> Mul<&HermPoly<F>> for &HermPoly<F> {
    type Output = HermPoly<F>;
    fn mul(self, rhs: &HermPoly<F>) -> HermPoly<F> {
        if self.is_zero() || rhs.is_zero() {
            return HermPoly::zero();
        }
        let mut acc: HashMap<Monomial, F> = HashMap::with_capacity(self.len() * rhs.len() / 2 + 1);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let t = c1.mul_ref(c2);
                acc.entry(m1.mul(*m2))
                    .and_modify(|e| e.add_assign_ref(&t))
                    .or_insert(t);
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        HermPoly { terms }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<F: Scalar> $tr for HermPoly<F> {
            type Output = HermPoly<F>;
            fn $m(self, rhs: HermPoly<F>) -> HermPoly<F> {
                (&self).$m(&rhs)
            }
        }
        impl<F: Scalar> $tr<&HermPoly<F>> for HermPoly<F> {
            type Output = HermPoly<F>;
            fn $m(self, rhs: &HermPoly<F>) -> HermPoly<F> {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
