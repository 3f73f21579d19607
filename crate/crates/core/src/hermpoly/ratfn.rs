use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{factor_out, one_plus_zzbar, HermPoly, Monomial};
use crate::error::{Error, Result};
use crate::scalar::{Complex64, Scalar};

/// Quotient of two polynomials in ℂ[z, z̄].
///
/// Stored with the denominator's graded-lex leading coefficient equal to one.
/// In exact mode common factors are cancelled for the monomial content, for
/// powers of `1 + z z̄`, and for any extra factors supplied at construction;
/// there is no general multivariate GCD. Equality is decided by
/// cross-multiplication, so it never depends on how far a value was reduced.
#[derive(Clone)]
pub struct RationalFn<F> {
    num: HermPoly<F>,
    den: HermPoly<F>,
}

impl<F: Scalar> RationalFn<F> {
    pub fn new(num: HermPoly<F>, den: HermPoly<F>) -> Result<Self> {
        Self::with_factors(num, den, &[])
    }

    /// Like [`RationalFn::new`], additionally trying to cancel each of
    /// `factors` from numerator and denominator.
    pub fn with_factors(num: HermPoly<F>, den: HermPoly<F>, factors: &[HermPoly<F>]) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut f = Self { num, den };
        f.normalize(factors);
        Ok(f)
    }

    pub fn from_poly(p: HermPoly<F>) -> Self {
        Self { num: p, den: HermPoly::one() }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(HermPoly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(HermPoly::zero())
    }

    pub fn num(&self) -> &HermPoly<F> {
        &self.num
    }

    pub fn den(&self) -> &HermPoly<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalize(&mut self, factors: &[HermPoly<F>]) {
        if self.num.is_zero() {
            self.den = HermPoly::one();
            return;
        }
        let a = self.num.min_exponents();
        let b = self.den.min_exponents();
        let g = Monomial { z: a.z.min(b.z), zbar: a.zbar.min(b.zbar) };
        if g != Monomial::ONE {
            self.num = self.num.div_monomial(g);
            self.den = self.den.div_monomial(g);
        }
        if F::EXACT && !self.den.is_constant() {
            if let Some(q) = self.num.div_exact(&self.den) {
                self.num = q;
                self.den = HermPoly::one();
            } else {
                let s = one_plus_zzbar::<F>();
                for q in std::iter::once(&s).chain(factors.iter()) {
                    self.cancel(q);
                }
            }
        }
        let lead = self.den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
        if !lead.is_one() {
            let inv = F::one() / lead;
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    fn cancel(&mut self, q: &HermPoly<F>) {
        if q.is_constant() || self.den.is_constant() {
            return;
        }
        while let Some(d) = self.den.div_exact(q) {
            match self.num.div_exact(q) {
                Some(n) => {
                    self.num = n;
                    self.den = d;
                }
                None => break,
            }
        }
    }

    pub fn conj(&self) -> Self {
        let mut f = Self { num: self.num.conj(), den: self.den.conj() };
        f.normalize(&[]);
        f
    }

    /// Numerator and denominator both real.
    pub fn is_real(&self) -> bool {
        self.num.is_real() && self.den.is_real()
            || (&self.num * &self.den.conj()).is_real()
    }

    pub fn scale(&self, c: &F) -> Self {
        Self { num: self.num.scale(c), den: self.den.clone() }
    }

    /// `Some(c)` iff the function is the constant `c`.
    pub fn as_constant(&self) -> Option<F> {
        if self.num.is_zero() {
            return Some(F::zero());
        }
        let ln = self.num.leading()?;
        let ld = self.den.leading()?;
        if ln.0 != ld.0 {
            return None;
        }
        let c = ln.1.clone() / ld.1.clone();
        let scaled = self.den.scale(&c);
        if self.num.len() != scaled.len() {
            return None;
        }
        let same = self
            .num
            .terms()
            .zip(scaled.terms())
            .all(|((m1, c1), (m2, c2))| m1 == m2 && c1.near(c2));
        same.then_some(c)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let d = self.den.eval(z);
        if d.norm() < 1e-12 {
            return Err(Error::PoleHit);
        }
        Ok(self.num.eval(z) / d)
    }

    pub fn map_coeffs<G: Scalar>(&self, f: impl Fn(&F) -> G) -> RationalFn<G> {
        let num = self.num.map_coeffs(&f);
        let den = self.den.map_coeffs(&f);
        RationalFn::new(num, den).expect("nonzero denominator")
    }

    pub fn to_float(&self) -> RationalFn<Complex64> {
        self.map_coeffs(|c| c.to_c64())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.num.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    /// Display with powers of `1 + z zbar` pulled out of numerator and
    /// denominator, e.g. `4/(1 + z zbar)^2`.
    pub fn fmt_factored(&self) -> String {
        let s = one_plus_zzbar::<F>();
        let split = |p: &HermPoly<F>| -> (u32, HermPoly<F>) {
            if !F::EXACT || p.is_constant() {
                return (0, p.clone());
            }
            factor_out(p, &s).unwrap_or((0, p.clone()))
        };
        let (mn, rn) = split(&self.num);
        let (md, rd) = split(&self.den);
        let factor = |m: u32| match m {
            0 => String::new(),
            1 => "(1 + z zbar)".to_string(),
            m => format!("(1 + z zbar)^{m}"),
        };
        // (text, needs parentheses when used as an operand)
        let part = |r: &HermPoly<F>, m: u32| -> (String, bool) {
            if m == 0 {
                (r.to_string(), r.len() > 1)
            } else if r.is_one() {
                (factor(m), false)
            } else if r.len() > 1 {
                (format!("({r}){}", factor(m)), true)
            } else {
                (format!("{r}{}", factor(m)), true)
            }
        };
        let (num, num_compound) = part(&rn, mn);
        if self.den.is_one() {
            return num;
        }
        let (den, den_compound) = part(&rd, md);
        let num = if num_compound && mn == 0 { format!("({num})") } else { num };
        let den = if den_compound { format!("({den})") } else { den };
        format!("{num}/{den}")
    }
}

impl<F: Scalar> PartialEq for RationalFn<F> {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl<F: Scalar> fmt::Debug for RationalFn<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<F: Scalar> fmt::Display for RationalFn<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl<F: Scalar> Neg for RationalFn<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { num: -self.num, den: self.den }
    }
}

impl<F: Scalar> Add<&RationalFn<F>> for &RationalFn<F> {
    type Output = RationalFn<F>;
    fn add(self, rhs: &RationalFn<F>) -> RationalFn<F> {
        if self.den == rhs.den {
            return RationalFn::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero");
        }
        if F::EXACT {
            if let Some(k) = rhs.den.div_exact(&self.den) {
                return RationalFn::new(&self.num * &k + rhs.num.clone(), rhs.den.clone()).expect("nonzero");
            }
            if let Some(k) = self.den.div_exact(&rhs.den) {
                return RationalFn::new(&rhs.num * &k + self.num.clone(), self.den.clone()).expect("nonzero");
            }
        }
        RationalFn::new(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
        .expect("nonzero")
    }
}

impl<F: Scalar> Sub<&RationalFn<F>> for &RationalFn<F> {
    type Output = RationalFn<F>;
    fn sub(self, rhs: &RationalFn<F>) -> RationalFn<F> {
        self + &(-rhs.clone())
    }
}

impl<F: Scalar> Mul<&RationalFn<F>> for &RationalFn<F> {
    type Output = RationalFn<F>;
    fn mul(self, rhs: &RationalFn<F>) -> RationalFn<F> {
        RationalFn::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero")
    }
}

impl<F: Scalar> Div<&RationalFn<F>> for &RationalFn<F> {
    type Output = RationalFn<F>;
    fn div(self, rhs: &RationalFn<F>) -> RationalFn<F> {
        self.checked_div(rhs).expect("division by the zero rational function")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<F: Scalar> $tr for RationalFn<F> {
            type Output = RationalFn<F>;
            fn $m(self, rhs: RationalFn<F>) -> RationalFn<F> {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);
