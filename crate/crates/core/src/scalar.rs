//! Scalar polynomials in dot and box products with exact coefficients, and a
//! parser for their text form.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::One;
use thiserror::Error;

use crate::coeff::{CoeffAtom, CoeffSum, Rational};
use crate::tensor::{simplify, Monomial, TensorPoly, VectorSymbol, Work};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ScalarPoly {
    terms: BTreeMap<Monomial, CoeffSum>,
}

impl ScalarPoly {
    pub fn zero() -> Self {
        ScalarPoly::default()
    }

    pub fn constant(c: CoeffSum) -> Self {
        let mut p = ScalarPoly::zero();
        p.add_term(Monomial::default(), c);
        p
    }

    pub fn atom(a: CoeffAtom) -> Self {
        Self::constant(CoeffSum::from_atom(a))
    }

    pub fn one() -> Self {
        Self::atom(CoeffAtom::one())
    }

    pub fn dot(a: &VectorSymbol, b: &VectorSymbol) -> Self {
        let mut w = Work::new(Rational::one());
        w.pairs
            .push([crate::tensor::Leg::Vec(a.clone()), crate::tensor::Leg::Vec(b.clone())]);
        Self::from_work(w)
    }

    /// `a·(b×c)`
    pub fn box3(a: &VectorSymbol, b: &VectorSymbol, c: &VectorSymbol) -> Self {
        let mut w = Work::new(Rational::one());
        w.eps.push([a, b, c].map(|v| crate::tensor::Leg::Vec(v.clone())));
        Self::from_work(w)
    }

    fn from_work(w: Work) -> Self {
        let mut out = Vec::new();
        simplify(w, &mut out);
        let mut p = ScalarPoly::zero();
        for (m, c) in out {
            p.add_term(m, CoeffSum::from_rational(c));
        }
        p
    }

    /// `prefactor · poly` for a rank-zero tensor.
    pub fn from_tensor(poly: &TensorPoly, prefactor: &CoeffAtom) -> Self {
        assert_eq!(poly.rank(), 0, "scalar polynomial from a tensor");
        let mut p = ScalarPoly::zero();
        for (m, c) in poly.terms() {
            p.add_term(m.clone(), CoeffSum::from_atom(prefactor.scale(c)));
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: CoeffSum) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_default();
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CoeffSum)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value when the polynomial has no vector dependence.
    pub fn as_constant(&self) -> Option<CoeffSum> {
        match self.terms.len() {
            0 => Some(CoeffSum::zero()),
            1 => self.terms.get(&Monomial::default()).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn neg(&self) -> Self {
        ScalarPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CoeffSum) -> Self {
        let mut p = ScalarPoly::zero();
        for (m, x) in &self.terms {
            p.add_term(m.clone(), x.mul(c));
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = ScalarPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let w = Work::from_monomial(m1, &Rational::one()).merged(&Work::from_monomial(m2, &Rational::one()));
                let c = c1.mul(c2);
                let mut out = Vec::new();
                simplify(w, &mut out);
                for (m, r) in out {
                    p.add_term(m, c.scale_atom(&CoeffAtom::from_rational(r)));
                }
            }
        }
        p
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(ScalarPoly::one(), |acc, _| acc.mul(self))
    }

    /// Numerical value for vectors given by `vec_of`.
    pub fn eval(&self, vec_of: &dyn Fn(&VectorSymbol) -> [f64; 3]) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| c.to_complex() * eval_scalar_monomial(m, vec_of))
            .sum()
    }
}

pub(crate) fn eval_scalar_monomial(m: &Monomial, vec_of: &dyn Fn(&VectorSymbol) -> [f64; 3]) -> f64 {
    let mut v = 1.0;
    for ((a, b), e) in &m.dots {
        let (x, y) = (vec_of(a), vec_of(b));
        v *= (x[0] * y[0] + x[1] * y[1] + x[2] * y[2]).powi(*e as i32);
    }
    for [a, b, c] in &m.boxes {
        let (x, y, z) = (vec_of(a), vec_of(b), vec_of(c));
        v *= x[0] * (y[1] * z[2] - y[2] * z[1])
            + x[1] * (y[2] * z[0] - y[0] * z[2])
            + x[2] * (y[0] * z[1] - y[1] * z[0]);
    }
    v
}

impl fmt::Display for ScalarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::render::scalar_text(self))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{message} at offset {pos}")]
pub struct PolyParseError {
    pub pos: usize,
    pub message: String,
}

/// Parses the text form produced by the renderer, e.g.
/// `sqrt(3)/(8*sqrt(2)*pi^(3/2)) * (3*(a.c)*(b.c) - (a.b))`.
pub fn parse_scalar(src: &str) -> Result<ScalarPoly, PolyParseError> {
    let mut p = PolyParser { src, pos: 0 };
    let v = p.sum()?;
    p.ws();
    if p.pos != src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

struct PolyParser<'a> {
    src: &'a str,
    pos: usize,
}

impl PolyParser<'_> {
    fn err(&self, message: &str) -> PolyParseError {
        PolyParseError {
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), PolyParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn vector(&mut self) -> Result<VectorSymbol, PolyParseError> {
        match self.ident() {
            Some(name) => Ok(VectorSymbol::new(&name)),
            None => Err(self.err("expected vector name")),
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.ws();
        let rest = &self.src[self.pos..];
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_alphabetic() => {}
            _ => return None,
        }
        let end = chars
            .find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '_'))
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        self.pos += end;
        Some(rest[..end].to_string())
    }

    fn integer(&mut self) -> Option<num_bigint::BigInt> {
        self.ws();
        let rest = &self.src[self.pos..];
        let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        if end == 0 {
            return None;
        }
        self.pos += end;
        rest[..end].parse().ok()
    }

    fn sum(&mut self) -> Result<ScalarPoly, PolyParseError> {
        let mut acc = if self.eat('-') {
            self.product()?.neg()
        } else {
            self.eat('+');
            self.product()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.product()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.product()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<ScalarPoly, PolyParseError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat('/') {
                let at = self.pos;
                let d = self.power()?;
                let inv = d
                    .as_constant()
                    .and_then(|c| c.as_atom())
                    .and_then(|a| a.inv().ok())
                    .ok_or(PolyParseError {
                        pos: at,
                        message: "divisor must be a nonzero single-term constant".into(),
                    })?;
                acc = acc.scale(&CoeffSum::from_atom(inv));
            } else {
                return Ok(acc);
            }
        }
    }

    /// `INT | '(' ['-'] INT ['/' INT] ')'`
    fn exponent(&mut self) -> Result<(i64, i64), PolyParseError> {
        let to_i64 = |b: num_bigint::BigInt| i64::try_from(b).map_err(|_| "exponent too large");
        if self.eat('(') {
            let neg = self.eat('-');
            let n = self.integer().ok_or_else(|| self.err("expected exponent"))?;
            let mut n = to_i64(n).map_err(|m| self.err(m))?;
            if neg {
                n = -n;
            }
            let d = if self.eat('/') {
                let d = self
                    .integer()
                    .ok_or_else(|| self.err("expected exponent denominator"))?;
                to_i64(d).map_err(|m| self.err(m))?
            } else {
                1
            };
            self.expect(')')?;
            Ok((n, d))
        } else {
            let n = self.integer().ok_or_else(|| self.err("expected exponent"))?;
            Ok((to_i64(n).map_err(|m| self.err(m))?, 1))
        }
    }

    fn power(&mut self) -> Result<ScalarPoly, PolyParseError> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.pos;
        let (n, d) = self.exponent()?;
        let bad = |m: &str| PolyParseError {
            pos: at,
            message: m.into(),
        };
        let atom = base.as_constant().and_then(|c| c.as_atom());
        if d == 2 || n < 0 {
            let a = atom.ok_or_else(|| bad("fractional or negative power of a non-constant"))?;
            let pure_pi = a.rat().is_one() && a.radicand().is_one() && a.i_pow() == 0;
            if d == 2 {
                if !pure_pi {
                    return Err(bad("half-integer power of something other than pi"));
                }
                let k = a.pi_half() as i64 * n;
                if k % 2 != 0 {
                    return Err(bad("quarter power of pi"));
                }
                return Ok(ScalarPoly::atom(CoeffAtom::pi_pow_half((k / 2) as i32)));
            }
            let p = a.pow(n).map_err(|e| bad(&e.to_string()))?;
            return Ok(ScalarPoly::atom(p));
        }
        if d != 1 {
            return Err(bad("unsupported exponent"));
        }
        Ok(base.pow(n as u32))
    }

    fn primary(&mut self) -> Result<ScalarPoly, PolyParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let save = self.pos;
                if let Some(a) = self.ident().map(|n| VectorSymbol::new(&n)) {
                    if self.eat('.') {
                        let b = self.vector()?;
                        self.expect(')')?;
                        return Ok(ScalarPoly::dot(&a, &b));
                    }
                }
                self.pos = save;
                let v = self.sum()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer().expect("digit present");
                Ok(ScalarPoly::atom(CoeffAtom::from_rational(Rational::from_integer(n))))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let at = self.pos;
                let name = self.ident().expect("letter present");
                match name.as_str() {
                    "pi" => Ok(ScalarPoly::atom(CoeffAtom::pi_pow_half(2))),
                    "i" => Ok(ScalarPoly::atom(CoeffAtom::i_pow_of(1))),
                    "sqrt" => {
                        self.expect('(')?;
                        let inner_at = self.pos;
                        let v = self.sum()?;
                        self.expect(')')?;
                        let a = v
                            .as_constant()
                            .and_then(|c| c.as_atom())
                            .filter(|a| a.radicand().is_one() && a.pi_half() == 0 && a.i_pow() == 0 && !a.is_zero());
                        let r = a.ok_or(PolyParseError {
                            pos: inner_at,
                            message: "sqrt takes a positive rational".into(),
                        })?;
                        CoeffAtom::sqrt(r.rat().clone())
                            .map(ScalarPoly::atom)
                            .map_err(|e| PolyParseError {
                                pos: inner_at,
                                message: e.to_string(),
                            })
                    }
                    "box" => {
                        self.expect('(')?;
                        let mut v = Vec::new();
                        for k in 0..3 {
                            if k > 0 {
                                self.expect(',')?;
                            }
                            v.push(self.vector()?);
                        }
                        self.expect(')')?;
                        Ok(ScalarPoly::box3(&v[0], &v[1], &v[2]))
                    }
                    _ => Err(PolyParseError {
                        pos: at,
                        message: format!("unknown name '{name}'"),
                    }),
                }
            }
            _ => Err(self.err("expected a number, product or parenthesis")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rat};

    fn v(s: &str) -> VectorSymbol {
        VectorSymbol::new(s)
    }

    #[test]
    fn parses_constants() {
        let p = parse_scalar("sqrt(3)/(8*sqrt(2)*pi^(3/2))").unwrap();
        let expected = CoeffAtom::sqrt(rat(3, 2))
            .unwrap()
            .mul(&CoeffAtom::pi_pow_half(-3))
            .scale(&rat(1, 8));
        assert_eq!(p, ScalarPoly::atom(expected));
        assert_eq!(
            parse_scalar("2^(-1)").unwrap(),
            ScalarPoly::atom(CoeffAtom::from_rational(rat(1, 2)))
        );
        assert_eq!(parse_scalar("i*i + 1").unwrap(), ScalarPoly::zero());
    }

    #[test]
    fn parses_polynomials() {
        let p = parse_scalar("3*(a.c)*(b.c) - (a.b)").unwrap();
        let q = ScalarPoly::dot(&v("a"), &v("c"))
            .mul(&ScalarPoly::dot(&v("b"), &v("c")))
            .scale(&CoeffSum::from_rational(int(3)))
            .sub(&ScalarPoly::dot(&v("a"), &v("b")));
        assert_eq!(p, q);
        assert_eq!(parse_scalar("(b.a)").unwrap(), parse_scalar("(a.b)").unwrap());
        assert_eq!(parse_scalar("(a.a)").unwrap(), ScalarPoly::one());
    }

    #[test]
    fn boxes_multiply_to_dots() {
        let p = parse_scalar("box(a,b,c)*box(a,b,c)").unwrap();
        // Gram determinant of three unit vectors.
        let q = parse_scalar("1 - (a.b)^2 - (a.c)^2 - (b.c)^2 + 2*(a.b)*(a.c)*(b.c)").unwrap();
        assert_eq!(p, q);
        assert_eq!(parse_scalar("box(b,a,c) + box(a,b,c)").unwrap(), ScalarPoly::zero());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_scalar("sqrt((a.b))").is_err());
        assert!(parse_scalar("(a.b)/(a.c)").is_err());
        assert!(parse_scalar("3 +").is_err());
        assert!(parse_scalar("foo").is_err());
    }
}
