//! Exact coefficients of the form `rat · √radicand · π^(pi_half/2) · i^i_pow`.
//!
//! Every symbolic result lives over this field. An atom is kept in a unique
//! normal form so that structural equality coincides with equality of values.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("double factorial undefined for {0}")]
    DoubleFactorialDomain(i64),
    #[error("factorial undefined for {0}")]
    FactorialDomain(i64),
    #[error("radicand must be positive, got {0}")]
    NonPositiveRadicand(String),
    #[error("division by zero")]
    DivisionByZero,
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n!` for `n >= 0`.
pub fn factorial(n: i64) -> Result<BigInt, CoeffError> {
    if n < 0 {
        return Err(CoeffError::FactorialDomain(n));
    }
    Ok((2..=n).fold(BigInt::one(), |acc, k| acc * k))
}

/// `n!!` for `n >= -1`, with `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> Result<BigInt, CoeffError> {
    if n < -1 {
        return Err(CoeffError::DoubleFactorialDomain(n));
    }
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    Ok(acc)
}

/// Factorial for arguments known to be in range.
pub(crate) fn fact(n: i64) -> BigInt {
    factorial(n).expect("factorial argument out of range")
}

/// Double factorial for arguments known to be in range.
pub(crate) fn dfact(n: i64) -> BigInt {
    double_factorial(n).expect("double factorial argument out of range")
}

/// Splits `n > 0` into `(s, p)` with `n = s² p` and `p` square-free.
fn square_split(n: &BigInt) -> (BigInt, BigInt) {
    debug_assert!(n.is_positive());
    let mut rest = n.clone();
    let mut outside = BigInt::one();
    let mut inside = BigInt::one();
    let mut p = BigInt::from(2u32);
    while &p * &p <= rest {
        let mut count = 0u32;
        while rest.is_multiple_of(&p) {
            rest /= &p;
            count += 1;
        }
        if count > 0 {
            for _ in 0..count / 2 {
                outside *= &p;
            }
            if count % 2 == 1 {
                inside *= &p;
            }
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    inside *= rest;
    (outside, inside)
}

/// A single coefficient `rat · √radicand · π^(pi_half/2) · i^i_pow`.
///
/// Normal form: the value is first written with a square-free integer under
/// the root, `(n/d)·√p`; then `g = gcd(p, d)` is moved into the denominator of
/// the radicand, giving `(n·g/d)·√((p/g)/g)`. This keeps displays such as
/// `√3/(8√2)` while remaining unique per value. A zero atom has radicand 1,
/// `pi_half = 0` and `i_pow = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoeffAtom {
    rat: Rational,
    radicand: Rational,
    pi_half: i32,
    i_pow: u8,
}

impl CoeffAtom {
    pub fn new(rat: Rational, radicand: Rational, pi_half: i32, i_pow: i64) -> Result<Self, CoeffError> {
        if !radicand.is_positive() {
            return Err(CoeffError::NonPositiveRadicand(radicand.to_string()));
        }
        Ok(normalize_atom(CoeffAtom {
            rat,
            radicand,
            pi_half,
            i_pow: i_pow.rem_euclid(4) as u8,
        }))
    }

    pub fn zero() -> Self {
        CoeffAtom {
            rat: Rational::zero(),
            radicand: Rational::one(),
            pi_half: 0,
            i_pow: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        normalize_atom(CoeffAtom {
            rat: r,
            radicand: Rational::one(),
            pi_half: 0,
            i_pow: 0,
        })
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    /// `√r` for a positive rational `r`.
    pub fn sqrt(r: Rational) -> Result<Self, CoeffError> {
        Self::new(Rational::one(), r, 0, 0)
    }

    /// `c · √r` for positive `r`.
    pub fn scaled_sqrt(c: Rational, r: Rational) -> Result<Self, CoeffError> {
        Self::new(c, r, 0, 0)
    }

    /// `π^(k/2)`.
    pub fn pi_pow_half(k: i32) -> Self {
        CoeffAtom {
            rat: Rational::one(),
            radicand: Rational::one(),
            pi_half: k,
            i_pow: 0,
        }
    }

    /// `i^k`.
    pub fn i_pow_of(k: i64) -> Self {
        CoeffAtom {
            rat: Rational::one(),
            radicand: Rational::one(),
            pi_half: 0,
            i_pow: k.rem_euclid(4) as u8,
        }
    }

    pub fn rat(&self) -> &Rational {
        &self.rat
    }

    pub fn radicand(&self) -> &Rational {
        &self.radicand
    }

    pub fn pi_half(&self) -> i32 {
        self.pi_half
    }

    pub fn i_pow(&self) -> u8 {
        self.i_pow
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.i_pow % 2 == 0
    }

    /// Same value with the rational part scaled by `r`.
    pub fn scale(&self, r: &Rational) -> Self {
        normalize_atom(CoeffAtom {
            rat: &self.rat * r,
            ..self.clone()
        })
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn mul(&self, other: &Self) -> Self {
        atom_mul(self, other)
    }

    pub fn inv(&self) -> Result<Self, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        // 1/(r √R) = √R / (r R)
        Ok(normalize_atom(CoeffAtom {
            rat: (&self.rat * &self.radicand).recip(),
            radicand: self.radicand.clone(),
            pi_half: -self.pi_half,
            i_pow: ((4 - self.i_pow as i64) % 4) as u8,
        }))
    }

    pub fn div(&self, other: &Self) -> Result<Self, CoeffError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, n: i64) -> Result<Self, CoeffError> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut acc = CoeffAtom::one();
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// The value rewritten as `(coef) · √p` with square-free integer `p`;
    /// `π` and `i` powers are left aside.
    pub fn rationalized(&self) -> (Rational, BigInt) {
        let p = self.radicand.numer() * self.radicand.denom();
        let coef = &self.rat / Rational::from_integer(self.radicand.denom().clone());
        (coef, p)
    }

    pub fn to_complex(&self) -> Complex64 {
        let magnitude = self.rat.to_f64().unwrap_or(f64::NAN)
            * self.radicand.to_f64().unwrap_or(f64::NAN).sqrt()
            * std::f64::consts::PI.powf(self.pi_half as f64 / 2.0);
        match self.i_pow {
            0 => Complex64::new(magnitude, 0.0),
            1 => Complex64::new(0.0, magnitude),
            2 => Complex64::new(-magnitude, 0.0),
            _ => Complex64::new(0.0, -magnitude),
        }
    }

    /// Real value; `None` if the atom carries an odd power of `i`.
    pub fn to_f64(&self) -> Option<f64> {
        self.is_real().then(|| self.to_complex().re)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "num": big_json(self.rat.numer()),
            "den": big_json(self.rat.denom()),
            "radicand_num": big_json(self.radicand.numer()),
            "radicand_den": big_json(self.radicand.denom()),
            "pi_half": self.pi_half,
            "i_pow": self.i_pow,
        })
    }

    /// Display pieces `(negative, numerator factors, denominator factors)`
    /// shared by the text and LaTeX renderers.
    pub(crate) fn display_parts(&self) -> DisplayParts {
        let mut negative = self.rat.is_negative();
        if self.i_pow >= 2 {
            negative = !negative;
        }
        DisplayParts {
            negative,
            imaginary: self.i_pow % 2 == 1,
            num: self.rat.numer().abs(),
            den: self.rat.denom().clone(),
            sqrt_num: self.radicand.numer().clone(),
            sqrt_den: self.radicand.denom().clone(),
            pi_half: self.pi_half,
        }
    }
}

fn big_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

pub(crate) struct DisplayParts {
    pub negative: bool,
    pub imaginary: bool,
    pub num: BigInt,
    pub den: BigInt,
    pub sqrt_num: BigInt,
    pub sqrt_den: BigInt,
    pub pi_half: i32,
}

impl fmt::Display for CoeffAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.display_parts();
        let mut num: Vec<String> = Vec::new();
        let mut den: Vec<String> = Vec::new();
        if p.imaginary {
            num.push("i".into());
        }
        if !p.num.is_one() {
            num.push(p.num.to_string());
        }
        if !p.sqrt_num.is_one() {
            num.push(format!("sqrt({})", p.sqrt_num));
        }
        if !p.den.is_one() {
            den.push(p.den.to_string());
        }
        if !p.sqrt_den.is_one() {
            den.push(format!("sqrt({})", p.sqrt_den));
        }
        match p.pi_half.cmp(&0) {
            Ordering::Greater => num.push(pi_text(p.pi_half)),
            Ordering::Less => den.push(pi_text(-p.pi_half)),
            Ordering::Equal => {}
        }
        if p.negative {
            write!(f, "-")?;
        }
        let numerator = if num.is_empty() { "1".to_string() } else { num.join("*") };
        match den.len() {
            0 => write!(f, "{numerator}"),
            1 => write!(f, "{numerator}/{}", den[0]),
            _ => write!(f, "{numerator}/({})", den.join("*")),
        }
    }
}

fn pi_text(k: i32) -> String {
    if k == 2 {
        "pi".into()
    } else if k % 2 == 0 {
        format!("pi^{}", k / 2)
    } else {
        format!("pi^({k}/2)")
    }
}

/// Brings an atom into its unique normal form.
pub fn normalize_atom(a: CoeffAtom) -> CoeffAtom {
    if a.rat.is_zero() {
        return CoeffAtom::zero();
    }
    // Rationalize: r √(n/d) = (r/d) √(n d)
    let under = a.radicand.numer() * a.radicand.denom();
    let (outside, p) = square_split(&under);
    let coef = a.rat * Rational::new(outside, a.radicand.denom().clone());
    let g = p.gcd(coef.denom());
    let coef = coef * Rational::from_integer(g.clone());
    let radicand = Rational::new(&p / &g, g);
    CoeffAtom {
        rat: coef,
        radicand,
        pi_half: a.pi_half,
        i_pow: a.i_pow % 4,
    }
}

/// Exact product of two atoms.
pub fn atom_mul(a: &CoeffAtom, b: &CoeffAtom) -> CoeffAtom {
    if a.is_zero() || b.is_zero() {
        return CoeffAtom::zero();
    }
    normalize_atom(CoeffAtom {
        rat: &a.rat * &b.rat,
        radicand: &a.radicand * &b.radicand,
        pi_half: a.pi_half + b.pi_half,
        i_pow: (a.i_pow + b.i_pow) % 4,
    })
}

/// Key under which like atoms merge: square-free integer radicand, π power,
/// and the parity of the `i` power (`i²` is folded into the sign).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct SumKey {
    radicand: BigInt,
    pi_half: i32,
    imaginary: bool,
}

/// A finite sum of atoms with pairwise distinct keys.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CoeffSum {
    atoms: Vec<CoeffAtom>,
}

impl CoeffSum {
    pub fn zero() -> Self {
        CoeffSum { atoms: Vec::new() }
    }

    pub fn from_atom(a: CoeffAtom) -> Self {
        Self::from_atoms(std::iter::once(a))
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::from_atom(CoeffAtom::from_rational(r))
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = CoeffAtom>) -> Self {
        let mut merged: std::collections::BTreeMap<SumKey, Rational> = Default::default();
        for a in atoms {
            if a.is_zero() {
                continue;
            }
            let (coef, p) = a.rationalized();
            let coef = if a.i_pow >= 2 { -coef } else { coef };
            let key = SumKey {
                radicand: p,
                pi_half: a.pi_half,
                imaginary: a.i_pow % 2 == 1,
            };
            *merged.entry(key).or_insert_with(Rational::zero) += coef;
        }
        let atoms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                normalize_atom(CoeffAtom {
                    rat: c,
                    radicand: Rational::from_integer(k.radicand),
                    pi_half: k.pi_half,
                    i_pow: if k.imaginary { 1 } else { 0 },
                })
            })
            .collect();
        CoeffSum { atoms }
    }

    pub fn atoms(&self) -> &[CoeffAtom] {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        sum_add(self, other)
    }

    pub fn mul(&self, other: &Self) -> Self {
        sum_mul(self, other)
    }

    pub fn neg(&self) -> Self {
        CoeffSum {
            atoms: self.atoms.iter().map(CoeffAtom::neg).collect(),
        }
    }

    pub fn scale_atom(&self, a: &CoeffAtom) -> Self {
        Self::from_atoms(self.atoms.iter().map(|x| x.mul(a)))
    }

    /// The single atom of a one-term sum (zero for the empty sum).
    pub fn as_atom(&self) -> Option<CoeffAtom> {
        match self.atoms.len() {
            0 => Some(CoeffAtom::zero()),
            1 => Some(self.atoms[0].clone()),
            _ => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        self.atoms.iter().map(CoeffAtom::to_complex).sum()
    }

    /// Real value, or `None` when some atom is imaginary.
    pub fn to_float(&self) -> Option<f64> {
        self.atoms
            .iter()
            .map(CoeffAtom::to_f64)
            .try_fold(0.0, |acc, x| x.map(|v| acc + v))
    }
}

pub fn sum_add(s: &CoeffSum, t: &CoeffSum) -> CoeffSum {
    CoeffSum::from_atoms(s.atoms.iter().chain(t.atoms.iter()).cloned())
}

pub fn sum_mul(s: &CoeffSum, t: &CoeffSum) -> CoeffSum {
    CoeffSum::from_atoms(s.atoms.iter().flat_map(|a| t.atoms.iter().map(move |b| atom_mul(a, b))))
}

impl fmt::Display for CoeffSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return write!(f, "0");
        }
        for (i, a) in self.atoms.iter().enumerate() {
            let s = a.to_string();
            if i == 0 {
                write!(f, "{s}")?;
            } else if let Some(rest) = s.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {s}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(r: Rational, radicand: Rational, pi_half: i32, i_pow: i64) -> CoeffAtom {
        CoeffAtom::new(r, radicand, pi_half, i_pow).unwrap()
    }

    #[test]
    fn normalize_extracts_squares() {
        let a = atom(int(1), int(8), 0, 0);
        assert_eq!(a.rat(), &int(2));
        assert_eq!(a.radicand(), &int(2));

        let b = atom(rat(1, 3), rat(9, 2), 0, 0);
        assert_eq!(b.rat(), &int(1));
        assert_eq!(b.radicand(), &rat(1, 2));

        let c = atom(int(5), int(1), 0, 6);
        assert_eq!(c.rat(), &int(5));
        assert_eq!(c.i_pow(), 2);
    }

    #[test]
    fn normalize_is_idempotent_on_samples() {
        for n in 1..60 {
            for d in 1..20 {
                let a = atom(rat(3, 7), rat(n, d), -3, 1);
                assert_eq!(normalize_atom(a.clone()), a);
            }
        }
    }

    #[test]
    fn products() {
        let half_root2 = atom(rat(1, 2), int(2), 0, 0);
        let third_root2 = atom(rat(1, 3), int(2), 0, 0);
        assert_eq!(atom_mul(&half_root2, &third_root2), CoeffAtom::from_rational(rat(1, 3)));

        let r = CoeffAtom::sqrt(rat(2, 15)).unwrap();
        assert_eq!(atom_mul(&r, &r), CoeffAtom::from_rational(rat(2, 15)));

        let p = atom_mul(&CoeffAtom::pi_pow_half(-1), &CoeffAtom::pi_pow_half(-2));
        assert_eq!(p, CoeffAtom::pi_pow_half(-3));
    }

    #[test]
    fn sums_merge_like_terms() {
        let r2 = CoeffSum::from_atom(CoeffAtom::sqrt(int(2)).unwrap());
        let two_r2 = CoeffSum::from_atom(atom(int(2), int(2), 0, 0));
        assert_eq!(sum_add(&r2, &two_r2), CoeffSum::from_atom(atom(int(3), int(2), 0, 0)));

        let r3 = CoeffSum::from_atom(CoeffAtom::sqrt(int(3)).unwrap());
        assert_eq!(sum_add(&r2, &r3).atoms().len(), 2);
        assert_eq!(sum_mul(&r2, &r3), CoeffSum::from_atom(CoeffAtom::sqrt(int(6)).unwrap()));

        // √(1/2) and √2/2 are the same value.
        let a = CoeffSum::from_atom(CoeffAtom::sqrt(rat(1, 2)).unwrap());
        let b = CoeffSum::from_atom(atom(rat(-1, 2), int(2), 0, 0));
        assert!(sum_add(&a, &b).is_zero());

        // i² folds into the sign when summing.
        let m = CoeffSum::from_atom(atom(int(5), int(1), 0, 2));
        assert!(sum_add(&m, &CoeffSum::from_rational(int(5))).is_zero());
    }

    #[test]
    fn float_values() {
        let a = atom(rat(3, 16), int(1), -3, 0);
        assert!((a.to_f64().unwrap() - 0.033_672_585_4).abs() < 1e-9);
        let b = atom(rat(1, 4), int(3), -2, 0);
        assert!((b.to_f64().unwrap() - 0.137_832_223_5).abs() < 1e-9);
        assert_eq!(CoeffSum::zero().to_float(), Some(0.0));
        assert_eq!(CoeffAtom::i_pow_of(1).to_f64(), None);
    }

    #[test]
    fn factorials() {
        assert_eq!(double_factorial(5).unwrap(), BigInt::from(15));
        assert_eq!(double_factorial(-1).unwrap(), BigInt::from(1));
        assert_eq!(double_factorial(0).unwrap(), BigInt::from(1));
        assert_eq!(factorial(0).unwrap(), BigInt::from(1));
        assert_eq!(factorial(6).unwrap(), BigInt::from(720));
        assert!(double_factorial(-2).is_err());
        assert!(factorial(-1).is_err());
    }

    #[test]
    fn display_matches_reference_style() {
        // √3/(8√2 π^{3/2})
        let a = atom(rat(1, 8), rat(3, 2), -3, 0);
        assert_eq!(a.to_string(), "sqrt(3)/(8*sqrt(2)*pi^(3/2))");
        let b = atom(int(1), int(3), -2, 0).scale(&rat(1, 4));
        assert_eq!(b.to_string(), "sqrt(3)/(4*pi)");
        assert_eq!(atom(rat(-3, 16), int(1), -3, 0).to_string(), "-3/(16*pi^(3/2))");
        assert_eq!(CoeffAtom::from_int(2).to_string(), "2");
    }

    #[test]
    fn inverse_and_pow() {
        let a = atom(rat(3, 8), rat(5, 2), -3, 1);
        let one = a.mul(&a.inv().unwrap());
        assert_eq!(one, CoeffAtom::one());
        let sq = a.pow(2).unwrap();
        assert_eq!(sq, a.mul(&a));
        assert!(CoeffAtom::zero().inv().is_err());
    }
}
