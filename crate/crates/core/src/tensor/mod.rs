//! Symbolic Cartesian tensors built from unit vectors, Kronecker deltas and
//! Levi-Civita symbols.
//!
//! A [`TensorPoly`] of rank `n` is a sum of monomials over the free slots
//! `0..n`. Every free slot occurs exactly once in a monomial: on a vector
//! factor `v_s`, on a delta `δ_st`, or as a leg of an `ε`. Fully contracted
//! pieces are kept as dot products `(v·w)` and box products `v·(w×u)`.

mod coupling;
mod enumerate;
mod harmonic;
mod simplify;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::coeff::Rational;

pub use coupling::{
    cartesian_coupling, couple_even, couple_odd, couple_raw_c, couple_raw_d, even_normalization, odd_normalization,
    same_vector_proportionality,
};
pub use enumerate::{distribution_count, distributions, Distribution};
pub use harmonic::{harmonic_tensor, vector_power};

pub(crate) use simplify::{simplify, Work, DUMMY_BASE};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("contraction order {k} exceeds ranks {left} and {right}")]
    ContractionOrder { k: u32, left: u32, right: u32 },
    #[error("triangle rule fails for ({0}, {1}, {2})")]
    Triangle(u32, u32, u32),
    #[error("coupling ({0}, {1}, {2}) has {3} parity")]
    Parity(u32, u32, u32, &'static str),
    #[error("slot {0} out of range for rank {1}")]
    Slot(u32, u32),
}

/// A unit vector, identified by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VectorSymbol(Arc<str>);

impl VectorSymbol {
    pub fn new(name: &str) -> Self {
        VectorSymbol(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for VectorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for VectorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for VectorSymbol {
    fn from(s: &str) -> Self {
        VectorSymbol::new(s)
    }
}

/// One index position of a δ or ε: either a slot or a contracted vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Leg {
    Slot(u32),
    Vec(VectorSymbol),
}

impl Leg {
    pub(crate) fn slot(&self) -> Option<u32> {
        match self {
            Leg::Slot(s) => Some(*s),
            Leg::Vec(_) => None,
        }
    }
}

/// Sorts three items in place and returns the permutation sign, or `None`
/// when two of them coincide.
pub(crate) fn sort3<T: Ord>(x: &mut [T; 3]) -> Option<bool> {
    let mut odd = false;
    for (i, j) in [(0, 1), (1, 2), (0, 1)] {
        match x[i].cmp(&x[j]) {
            std::cmp::Ordering::Greater => {
                x.swap(i, j);
                odd = !odd;
            }
            std::cmp::Ordering::Equal => return None,
            std::cmp::Ordering::Less => {}
        }
    }
    Some(odd)
}

pub type DotKey = (VectorSymbol, VectorSymbol);

/// The factor structure of one term; the coefficient lives in the owning
/// [`TensorPoly`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    /// `(v, s)` for a factor `v_s`, sorted by slot.
    pub vectors: Vec<(VectorSymbol, u32)>,
    /// `δ_st` with `s < t`, sorted.
    pub deltas: Vec<(u32, u32)>,
    /// Levi-Civita factors with at least one free slot, legs ascending.
    pub eps: Vec<[Leg; 3]>,
    /// `(v·w)^e` with `v < w`.
    pub dots: BTreeMap<DotKey, u32>,
    /// Box products `v·(w×u)`, symbols ascending. At most one survives
    /// canonicalization; pairs are expanded into dot products.
    pub boxes: Vec<[VectorSymbol; 3]>,
}

impl Monomial {
    pub fn is_scalar(&self) -> bool {
        self.vectors.is_empty() && self.deltas.is_empty() && self.eps.is_empty()
    }

    pub fn dot_degree(&self) -> u32 {
        self.dots.values().sum()
    }

    /// Total degree of the monomial in one vector symbol.
    pub fn degree_in(&self, v: &VectorSymbol) -> u32 {
        let mut d = 0;
        d += self.vectors.iter().filter(|(w, _)| w == v).count() as u32;
        for e in &self.eps {
            d += e.iter().filter(|l| matches!(l, Leg::Vec(w) if w == v)).count() as u32;
        }
        for ((x, y), e) in &self.dots {
            if x == v {
                d += e;
            }
            if y == v {
                d += e;
            }
        }
        for b in &self.boxes {
            d += b.iter().filter(|w| *w == v).count() as u32;
        }
        d
    }

    /// Renames slots through `f` and restores canonical order. Returns the
    /// sign picked up from reordering ε legs.
    pub(crate) fn relabeled(&self, f: impl Fn(u32) -> u32) -> (Monomial, bool) {
        let mut odd = false;
        let mut vectors: Vec<_> = self.vectors.iter().map(|(v, s)| (v.clone(), f(*s))).collect();
        vectors.sort_by_key(|(_, s)| *s);
        let mut deltas: Vec<_> = self
            .deltas
            .iter()
            .map(|&(s, t)| {
                let (s, t) = (f(s), f(t));
                (s.min(t), s.max(t))
            })
            .collect();
        deltas.sort();
        let mut eps: Vec<[Leg; 3]> = self
            .eps
            .iter()
            .map(|e| {
                let mut e = e.clone().map(|l| match l {
                    Leg::Slot(s) => Leg::Slot(f(s)),
                    v => v,
                });
                if sort3(&mut e).expect("distinct legs stay distinct") {
                    odd = !odd;
                }
                e
            })
            .collect();
        eps.sort();
        (
            Monomial {
                vectors,
                deltas,
                eps,
                dots: self.dots.clone(),
                boxes: self.boxes.clone(),
            },
            odd,
        )
    }
}

/// A term: rational coefficient times a canonical monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorTerm {
    pub coeff: Rational,
    pub monomial: Monomial,
}

/// Sum of monomials of fixed rank in canonical form: sorted by monomial,
/// like terms merged, zero coefficients dropped.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorPoly {
    rank: u32,
    terms: BTreeMap<Monomial, Rational>,
}

impl TensorPoly {
    pub fn zero(rank: u32) -> Self {
        TensorPoly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = TensorPoly::zero(0);
        p.add_term(Monomial::default(), c);
        p
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn rank(&self) -> u32 {
        self.rank
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn to_terms(&self) -> Vec<TensorTerm> {
        self.terms
            .iter()
            .map(|(m, c)| TensorTerm {
                coeff: c.clone(),
                monomial: m.clone(),
            })
            .collect()
    }

    /// Builds a polynomial from terms given in any order.
    pub fn from_terms(rank: u32, terms: impl IntoIterator<Item = TensorTerm>) -> Self {
        let mut p = TensorPoly::zero(rank);
        for t in terms {
            p.add_term(t.monomial, t.coeff);
        }
        p
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub(crate) fn add_work(&mut self, w: Work) {
        let mut out = Vec::new();
        simplify::simplify(w, &mut out);
        for (m, c) in out {
            self.add_term(m, c);
        }
    }

    pub fn add(&self, other: &TensorPoly) -> TensorPoly {
        assert_eq!(self.rank, other.rank, "rank mismatch in addition");
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, other: &TensorPoly) -> TensorPoly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> TensorPoly {
        if c.is_zero() {
            return TensorPoly::zero(self.rank);
        }
        TensorPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Contracts the last `k` slots of `self` with the first `k` slots of
    /// `other`. Free slots of the result are the remaining slots of `self`
    /// followed by the remaining slots of `other`.
    pub fn contract(&self, other: &TensorPoly, k: u32) -> Result<TensorPoly, TensorError> {
        if k > self.rank || k > other.rank {
            return Err(TensorError::ContractionOrder {
                k,
                left: self.rank,
                right: other.rank,
            });
        }
        let keep = self.rank - k;
        let left: Vec<Work> = self
            .terms
            .iter()
            .map(|(m, c)| Work::from_monomial(m, c).relabel(|s| if s < keep { s } else { DUMMY_BASE + (s - keep) }))
            .collect();
        let right: Vec<Work> = other
            .terms
            .iter()
            .map(|(m, c)| Work::from_monomial(m, c).relabel(|s| if s < k { DUMMY_BASE + s } else { keep + (s - k) }))
            .collect();
        let mut out = TensorPoly::zero(self.rank + other.rank - 2 * k);
        for l in &left {
            for r in &right {
                out.add_work(l.merged(r));
            }
        }
        Ok(out)
    }

    /// Outer product.
    pub fn product(&self, other: &TensorPoly) -> TensorPoly {
        self.contract(other, 0).expect("order zero always valid")
    }

    /// Full contraction of two tensors of equal rank.
    pub fn full_contract(&self, other: &TensorPoly) -> Result<TensorPoly, TensorError> {
        if self.rank != other.rank {
            return Err(TensorError::ContractionOrder {
                k: self.rank.max(other.rank),
                left: self.rank,
                right: other.rank,
            });
        }
        self.contract(other, self.rank)
    }

    /// Applies a permutation of free slots: slot `s` becomes `perm[s]`.
    pub fn permute_slots(&self, perm: &[u32]) -> TensorPoly {
        assert_eq!(perm.len() as u32, self.rank);
        let mut p = TensorPoly::zero(self.rank);
        for (m, c) in &self.terms {
            let (m2, odd) = m.relabeled(|s| perm[s as usize]);
            p.add_term(m2, if odd { -c.clone() } else { c.clone() });
        }
        p
    }

    /// Contracts free slots `s` and `t` with each other.
    pub fn trace(&self, s: u32, t: u32) -> Result<TensorPoly, TensorError> {
        for x in [s, t] {
            if x >= self.rank {
                return Err(TensorError::Slot(x, self.rank));
            }
        }
        if s == t || self.rank < 2 {
            return Err(TensorError::Slot(t, self.rank));
        }
        let mut out = TensorPoly::zero(self.rank - 2);
        let remap = |x: u32| {
            if x == s || x == t {
                DUMMY_BASE
            } else {
                x - (x > s) as u32 - (x > t) as u32
            }
        };
        for (m, c) in &self.terms {
            out.add_work(Work::from_monomial(m, c).relabel(remap));
        }
        Ok(out)
    }

    /// True when every transposition of slots leaves the tensor unchanged.
    pub fn is_symmetric(&self) -> bool {
        let n = self.rank as usize;
        (1..n).all(|i| {
            let mut perm: Vec<u32> = (0..n as u32).collect();
            perm.swap(0, i);
            self.permute_slots(&perm) == *self
        })
    }

    /// True when every slot pair traces to zero.
    pub fn is_traceless(&self) -> bool {
        let n = self.rank;
        (0..n).all(|s| (s + 1..n).all(|t| self.trace(s, t).map(|p| p.is_zero()).unwrap_or(false)))
    }

    /// Gcd of numerators over lcm of denominators, positive; one for zero.
    pub fn content(&self) -> Rational {
        use num_integer::Integer;
        let mut num = num_bigint::BigInt::zero();
        let mut den = num_bigint::BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            Rational::one()
        } else {
            Rational::new(num.abs(), den)
        }
    }

    /// Vector symbols occurring anywhere.
    pub fn symbols(&self) -> std::collections::BTreeSet<VectorSymbol> {
        let mut out = std::collections::BTreeSet::new();
        for m in self.terms.keys() {
            out.extend(m.vectors.iter().map(|(v, _)| v.clone()));
            for e in &m.eps {
                for l in e {
                    if let Leg::Vec(v) = l {
                        out.insert(v.clone());
                    }
                }
            }
            for (a, b) in m.dots.keys() {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            for b in &m.boxes {
                out.extend(b.iter().cloned());
            }
        }
        out
    }

    /// Sets `(v·w) = 1` throughout, i.e. identifies vector `w` with `v`.
    pub fn substitute_vector(&self, from: &VectorSymbol, to: &VectorSymbol) -> TensorPoly {
        let mut out = TensorPoly::zero(self.rank);
        let sub = |x: &VectorSymbol| if x == from { to.clone() } else { x.clone() };
        for (m, c) in &self.terms {
            out.add_work(Work::from_monomial(m, c).map_vectors(&sub));
        }
        out
    }
}

impl fmt::Display for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::render::poly_text(self))
    }
}

/// Rational coefficient helper: `(-1)^r`.
pub(crate) fn sign_pow(r: u32) -> Rational {
    if r % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}
