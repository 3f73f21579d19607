//! Text grammar for polynomials and the canonical printer.
//!
//! ```text
//! poly  := [sign] term { sign term }
//! term  := [coeff] [ "z" ["^" int] ] [ "zbar" ["^" int] ]
//! coeff := int ["/" int] | "(" [rat] [sign rat] "i" ")" | "(" rat ")"
//! ```
//! Float-backend holomorphic input additionally allows decimals, `sqrt(q)`
//! and `*` between coefficient factors, e.g. `1.5*sqrt(2) z^2`.
//! Whitespace is insignificant. The printer emits terms in ascending
//! graded-lex order.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{HermPoly, Monomial, UniPoly, MAX_EXPONENT};
use crate::error::{Error, Result};
use crate::scalar::{Complex64, GaussianRational, Scalar};

struct Lexer {
    chars: Vec<(usize, char)>,
    idx: usize,
    end: usize,
}

impl Lexer {
    fn new(text: &str) -> Self {
        let chars: Vec<_> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        Self { chars, idx: 0, end: text.len() }
    }

    fn pos(&self) -> usize {
        self.chars.get(self.idx).map_or(self.end, |(p, _)| *p)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).map(|(_, c)| *c)
    }

    fn peek_str(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(k, c)| self.chars.get(self.idx + k).map(|(_, d)| *d) == Some(c))
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax { pos: self.pos(), msg: msg.to_string() })
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.idx;
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.idx += 1;
        }
        if self.idx == start {
            return self.err("expected an integer");
        }
        Ok(s.parse().expect("digits"))
    }

    fn rational(&mut self) -> Result<BigRational> {
        let p = self.integer()?;
        if self.peek() == Some('/') {
            self.idx += 1;
            let at = self.pos();
            let q = self.integer()?;
            if q.is_zero() {
                return Err(Error::Syntax { pos: at, msg: "zero denominator".into() });
            }
            Ok(BigRational::new(p, q))
        } else {
            Ok(BigRational::from_integer(p))
        }
    }

    fn sign(&mut self) -> Option<bool> {
        match self.peek() {
            Some('+') => {
                self.idx += 1;
                Some(false)
            }
            Some('-') => {
                self.idx += 1;
                Some(true)
            }
            _ => None,
        }
    }

    /// Body of a parenthesised coefficient, after the opening parenthesis.
    fn complex(&mut self) -> Result<GaussianRational> {
        let mut value = GaussianRational::zero();
        let mut parts = 0;
        loop {
            let neg = self.sign().unwrap_or(false);
            if parts > 0 && !neg && self.chars.get(self.idx.wrapping_sub(1)).map(|(_, c)| *c) != Some('+') {
                return self.err("expected '+' or '-'");
            }
            let mag = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.rational()?
            } else if self.peek() == Some('i') {
                BigRational::one()
            } else {
                return self.err("expected a rational number");
            };
            let mag = if neg { -mag } else { mag };
            if self.peek() == Some('i') {
                self.idx += 1;
                value.im += mag;
            } else {
                value.re += mag;
            }
            parts += 1;
            if self.peek() == Some(')') {
                self.idx += 1;
                return Ok(value);
            }
            if parts == 2 {
                return self.err("expected ')'");
            }
        }
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.idx += 1;
        let at = self.pos();
        let e = self.integer()?;
        let e: u64 = e.try_into().map_err(|_| Error::ExponentOverflow(u64::MAX))?;
        if e > MAX_EXPONENT as u64 {
            return Err(Error::ExponentOverflow(e));
        }
        let _ = at;
        Ok(e as u32)
    }

    fn term(&mut self, holomorphic: bool) -> Result<(Monomial, GaussianRational)> {
        let start = self.idx;
        let coeff = match self.peek() {
            Some('(') => {
                self.idx += 1;
                Some(self.complex()?)
            }
            Some(c) if c.is_ascii_digit() => Some(GaussianRational::real(self.rational()?)),
            _ => None,
        };
        let mut m = Monomial::ONE;
        if self.peek() == Some('z') && !self.peek_str("zbar") {
            self.idx += 1;
            m.z = self.exponent()?;
        }
        if self.peek_str("zbar") {
            if holomorphic {
                return Err(Error::NonHolomorphic { pos: self.pos() });
            }
            self.idx += 4;
            m.zbar = self.exponent()?;
        }
        if self.idx == start {
            return self.err("expected a term");
        }
        Ok((m, coeff.unwrap_or_else(GaussianRational::one)))
    }

    fn poly(&mut self, holomorphic: bool) -> Result<HermPoly<GaussianRational>> {
        if self.chars.is_empty() {
            return self.err("empty polynomial");
        }
        let mut acc = HermPoly::zero();
        let mut neg = self.sign().unwrap_or(false);
        loop {
            let (m, c) = self.term(holomorphic)?;
            let c = if neg { -c } else { c };
            acc.add_term(m, &c);
            match self.sign() {
                Some(s) => neg = s,
                None if self.peek().is_none() => return Ok(acc),
                None => return self.err("expected '+', '-' or end of input"),
            }
        }
    }
}

impl Lexer {
    fn take_while(&mut self, s: &mut String, pred: fn(char) -> bool) {
        while let Some(c) = self.peek().filter(|&c| pred(c)) {
            s.push(c);
            self.idx += 1;
        }
    }

    fn decimal(&mut self) -> Result<f64> {
        let start = self.idx;
        let mut s = String::new();
        self.take_while(&mut s, |c| c.is_ascii_digit() || c == '.');
        if self.idx == start {
            return self.err("expected a number");
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            s.push('e');
            self.idx += 1;
            if let Some(c @ ('+' | '-')) = self.peek() {
                s.push(c);
                self.idx += 1;
            }
            self.take_while(&mut s, |c| c.is_ascii_digit());
        }
        let at = self.chars[start].0;
        s.parse().map_err(|_| Error::Syntax { pos: at, msg: format!("malformed number '{s}'") })
    }

    fn ratio(&mut self) -> Result<f64> {
        let p = self.decimal()?;
        if self.peek() != Some('/') {
            return Ok(p);
        }
        self.idx += 1;
        let at = self.pos();
        let q = self.decimal()?;
        if q == 0.0 {
            return Err(Error::Syntax { pos: at, msg: "zero denominator".into() });
        }
        Ok(p / q)
    }

    fn float_factor(&mut self) -> Result<Option<Complex64>> {
        if self.peek_str("sqrt(") {
            self.idx += 5;
            let x = self.ratio()?;
            if self.peek() != Some(')') {
                return self.err("expected ')'");
            }
            self.idx += 1;
            return Ok(Some(Complex64::new(x.sqrt(), 0.0)));
        }
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '.' => Ok(Some(Complex64::new(self.ratio()?, 0.0))),
            Some('(') => {
                self.idx += 1;
                let mut value = Complex64::new(0.0, 0.0);
                let mut parts = 0;
                loop {
                    let sign = self.sign();
                    if parts > 0 && sign.is_none() {
                        return self.err("expected '+' or '-'");
                    }
                    let neg = if sign == Some(true) { -1.0 } else { 1.0 };
                    let mag = if self.peek() == Some('i') { 1.0 } else { self.ratio()? };
                    if self.peek() == Some('i') {
                        self.idx += 1;
                        value.im += neg * mag;
                    } else {
                        value.re += neg * mag;
                    }
                    parts += 1;
                    if self.peek() == Some(')') {
                        self.idx += 1;
                        return Ok(Some(value));
                    }
                    if parts == 2 {
                        return self.err("expected ')'");
                    }
                }
            }
            _ => Ok(None),
        }
    }

    fn float_term(&mut self) -> Result<(u32, Complex64)> {
        let start = self.idx;
        let mut coeff = Complex64::new(1.0, 0.0);
        while let Some(c) = self.float_factor()? {
            coeff *= c;
            if self.peek() == Some('*') {
                self.idx += 1;
            }
        }
        let mut e = 0;
        if self.peek_str("zbar") {
            return Err(Error::NonHolomorphic { pos: self.pos() });
        }
        if self.peek() == Some('z') {
            self.idx += 1;
            e = self.exponent()?;
        }
        if self.peek_str("zbar") {
            return Err(Error::NonHolomorphic { pos: self.pos() });
        }
        if self.idx == start || self.chars.get(self.idx - 1).is_some_and(|(_, c)| *c == '*') {
            return self.err("expected a term");
        }
        Ok((e, coeff))
    }
}

/// Parses a polynomial in `z` and `z̄` with Gaussian-rational coefficients.
pub fn parse_poly(text: &str) -> Result<HermPoly<GaussianRational>> {
    Lexer::new(text).poly(false)
}

/// Parses a holomorphic polynomial; any `zbar` is rejected.
pub fn parse_hol(text: &str) -> Result<UniPoly<GaussianRational>> {
    let p = Lexer::new(text).poly(true)?;
    Ok(p.to_holomorphic().expect("parser rejects zbar"))
}

/// Parses a holomorphic polynomial with double-precision coefficients.
pub fn parse_hol_float(text: &str) -> Result<UniPoly<Complex64>> {
    let mut lx = Lexer::new(text);
    if lx.chars.is_empty() {
        return lx.err("empty polynomial");
    }
    let mut coeffs: Vec<Complex64> = Vec::new();
    let mut neg = lx.sign().unwrap_or(false);
    loop {
        let (e, c) = lx.float_term()?;
        let c = if neg { -c } else { c };
        if coeffs.len() <= e as usize {
            coeffs.resize(e as usize + 1, Complex64::new(0.0, 0.0));
        }
        coeffs[e as usize] += c;
        match lx.sign() {
            Some(s) => neg = s,
            None if lx.peek().is_none() => return Ok(UniPoly::new(coeffs)),
            None => return lx.err("expected '+', '-' or end of input"),
        }
    }
}

fn fmt_monomial(m: &Monomial) -> String {
    let mut parts = Vec::new();
    match m.z {
        0 => {}
        1 => parts.push("z".to_string()),
        e => parts.push(format!("z^{e}")),
    }
    match m.zbar {
        0 => {}
        1 => parts.push("zbar".to_string()),
        e => parts.push(format!("zbar^{e}")),
    }
    parts.join(" ")
}

impl<F: Scalar> fmt::Display for HermPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative_real();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let unit = c.is_one() || (-c.clone()).is_one();
            if *m == Monomial::ONE {
                f.write_str(&c.fmt_coeff())?;
            } else {
                if !unit {
                    f.write_str(&c.fmt_coeff())?;
                }
                f.write_str(&fmt_monomial(m))?;
            }
        }
        Ok(())
    }
}
