//! Coefficient types.
//!
//! Polynomial and rational-function code is generic over [`Scalar`], a
//! complex coefficient field. Two families implement it: the exact Gaussian
//! rationals ℚ(i) and IEEE complex numbers (`f32`/`f64`). Algorithms that
//! need decidable zero tests (rank decisions, exact division, factorization
//! certificates) check [`Scalar::EXACT`] or are only offered for the exact
//! instantiation.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

pub type Complex64 = Complex<f64>;

/// Complex coefficient field used by every polynomial type in the crate.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    /// Real subfield (weights, positivity).
    type Real: Clone + PartialOrd + Zero + One + fmt::Debug + fmt::Display + Send + Sync;

    /// `true` when equality and zero tests are decidable.
    const EXACT: bool;

    fn conj(&self) -> Self;
    fn from_real(r: Self::Real) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn from_gaussian(q: &GaussianRational) -> Self;
    fn to_c64(&self) -> Complex64;
    /// Float embedding; `None` for exact fields.
    fn from_f64(x: f64) -> Option<Self>;
    fn real_part(&self) -> Self::Real;
    fn imag_part(&self) -> Self::Real;

    fn mul_ref(&self, other: &Self) -> Self;
    fn add_assign_ref(&mut self, other: &Self);
    fn sub_assign_ref(&mut self, other: &Self);

    /// Equality up to rounding for float fields, exact otherwise.
    fn near(&self, other: &Self) -> bool;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    /// Coefficient in the textual grammar (`p/q` or `(p/q+r/si)`), without
    /// the sign when `is_negative_real` holds.
    fn fmt_coeff(&self) -> String;

    /// Real and strictly negative (printed with a leading minus).
    fn is_negative_real(&self) -> bool;
}

/// Exact element of ℚ(i). Both parts are kept in lowest terms by
/// `BigRational`, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self {
            re: BigRational::from_integer(re.into()),
            im: BigRational::from_integer(im.into()),
        }
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        let d = self.norm_sqr();
        assert!(!d.is_zero(), "division by zero in Q(i)");
        if self.im.is_zero() {
            return Self::real(d.recip() * &self.re);
        }
        Self { re: &self.re / &d, im: -(&self.im / &d) }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "({}+{}i)", self.re, self.im)
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_negative_real() {
            write!(f, "-{}", self.fmt_coeff())
        } else {
            f.write_str(&self.fmt_coeff())
        }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self { re: BigRational::one(), im: BigRational::zero() }
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self.sub_assign_ref(&rhs);
        self
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl Div for GaussianRational {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self.mul_ref(&rhs.inv())
    }
}

impl Scalar for GaussianRational {
    type Real = BigRational;
    const EXACT: bool = true;

    fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }
    fn from_real(r: BigRational) -> Self {
        Self::real(r)
    }
    fn from_rational(q: &BigRational) -> Self {
        Self::real(q.clone())
    }
    fn from_gaussian(q: &GaussianRational) -> Self {
        q.clone()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
    fn from_f64(_: f64) -> Option<Self> {
        None
    }
    fn real_part(&self) -> BigRational {
        self.re.clone()
    }
    fn imag_part(&self) -> BigRational {
        self.im.clone()
    }

    fn mul_ref(&self, o: &Self) -> Self {
        match (self.im.is_zero(), o.im.is_zero()) {
            (true, true) => Self::real(&self.re * &o.re),
            (true, false) => Self { re: &self.re * &o.re, im: &self.re * &o.im },
            (false, true) => Self { re: &self.re * &o.re, im: &self.im * &o.re },
            (false, false) => Self {
                re: &self.re * &o.re - &self.im * &o.im,
                im: &self.re * &o.im + &self.im * &o.re,
            },
        }
    }
    fn add_assign_ref(&mut self, o: &Self) {
        self.re += &o.re;
        if !o.im.is_zero() {
            self.im += &o.im;
        }
    }
    fn sub_assign_ref(&mut self, o: &Self) {
        self.re -= &o.re;
        if !o.im.is_zero() {
            self.im -= &o.im;
        }
    }
    fn near(&self, other: &Self) -> bool {
        self == other
    }

    fn fmt_coeff(&self) -> String {
        if self.im.is_zero() {
            return self.re.abs().to_string();
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        format!("({}{}{}i)", self.re, sign, self.im.abs())
    }
    fn is_negative_real(&self) -> bool {
        self.im.is_zero() && self.re.is_negative()
    }
}

pub fn rat_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for a direct conversion
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Rational from a small integer pair; panics on a zero denominator.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

macro_rules! float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for Complex<$t> {
            type Real = $t;
            const EXACT: bool = false;

            fn conj(&self) -> Self {
                Complex::conj(self)
            }
            fn from_real(r: $t) -> Self {
                Complex::new(r, 0.0)
            }
            fn from_rational(q: &BigRational) -> Self {
                Complex::new(rat_to_f64(q) as $t, 0.0)
            }
            fn from_gaussian(q: &GaussianRational) -> Self {
                Complex::new(rat_to_f64(&q.re) as $t, rat_to_f64(&q.im) as $t)
            }
            fn to_c64(&self) -> Complex64 {
                Complex64::new(self.re as f64, self.im as f64)
            }
            fn from_f64(x: f64) -> Option<Self> {
                Some(Complex::new(x as $t, 0.0))
            }
            fn real_part(&self) -> $t {
                self.re
            }
            fn imag_part(&self) -> $t {
                self.im
            }
            fn mul_ref(&self, o: &Self) -> Self {
                self * o
            }
            fn add_assign_ref(&mut self, o: &Self) {
                *self += o;
            }
            fn sub_assign_ref(&mut self, o: &Self) {
                *self -= o;
            }
            fn near(&self, other: &Self) -> bool {
                let scale = self.norm().max(other.norm()).max(1.0);
                (self - other).norm() <= $tol * scale
            }
            fn fmt_coeff(&self) -> String {
                if self.im == 0.0 {
                    return format!("{}", Float::abs(self.re));
                }
                let sign = if self.im < 0.0 { '-' } else { '+' };
                format!("({}{}{}i)", self.re, sign, Float::abs(self.im))
            }
            fn is_negative_real(&self) -> bool {
                self.im == 0.0 && self.re < 0.0
            }
        }
    };
}

float_scalar!(f64, 1e-9);
float_scalar!(f32, 1e-4);
