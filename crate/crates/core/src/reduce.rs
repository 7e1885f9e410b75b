//! Reduction of nested spherical-harmonic couplings to Cartesian form.
//!
//! Each coupling node `[X^{l1} × Y^{l2}]^{l3}` becomes `q Q(X, Y)` or
//! `r R(X, Y)`, where `q`, `r` are scalars and `Q`, `R` symmetric traceless
//! Cartesian tensors. A scalar result from `[X^L × Y^L]^0` carries the
//! factor `S(L)` times the full contraction `X ·(L) Y`. A result of rank
//! `L > 0` carries `n_L`, so its contraction with the spherical basis tensor
//! `e^{[L]}_M` gives component `M`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::coeff::{dfact, fact, CoeffAtom, Rational};
use crate::scalar::ScalarPoly;
use crate::tensor::{couple_even, couple_odd, harmonic_tensor, Monomial, TensorError, TensorPoly, VectorSymbol};
use crate::wigner::{three_j, triangle, ThreeJArgs};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CouplingExpr {
    Harmonic {
        l: u32,
        v: VectorSymbol,
    },
    Couple {
        left: Box<CouplingExpr>,
        right: Box<CouplingExpr>,
        l: u32,
    },
}

impl CouplingExpr {
    pub fn harmonic(l: u32, v: &str) -> Self {
        CouplingExpr::Harmonic {
            l,
            v: VectorSymbol::new(v),
        }
    }

    pub fn couple(left: CouplingExpr, right: CouplingExpr, l: u32) -> Self {
        CouplingExpr::Couple {
            left: Box::new(left),
            right: Box::new(right),
            l,
        }
    }

    /// Rank of the coupled tensor.
    pub fn rank(&self) -> u32 {
        match self {
            CouplingExpr::Harmonic { l, .. } | CouplingExpr::Couple { l, .. } => *l,
        }
    }

    /// Sum of harmonic degrees.
    pub fn degree(&self) -> u32 {
        match self {
            CouplingExpr::Harmonic { l, .. } => *l,
            CouplingExpr::Couple { left, right, .. } => left.degree() + right.degree(),
        }
    }

    /// Behaviour under inversion of all vectors relative to a true tensor of
    /// the same rank.
    pub fn parity(&self) -> Parity {
        if (self.degree() + self.rank()) % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn symbols(&self) -> BTreeSet<VectorSymbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<VectorSymbol>) {
        match self {
            CouplingExpr::Harmonic { v, .. } => {
                out.insert(v.clone());
            }
            CouplingExpr::Couple { left, right, .. } => {
                left.collect_symbols(out);
                right.collect_symbols(out);
            }
        }
    }

    /// Checks the triangle rule at every node.
    pub fn validate(&self) -> Result<(), ReduceError> {
        if let CouplingExpr::Couple { left, right, l } = self {
            left.validate()?;
            right.validate()?;
            let (l1, l2) = (left.rank(), right.rank());
            if !triangle(l1 as i64, l2 as i64, *l as i64) {
                return Err(ReduceError::Triangle { l1, l2, l3: *l });
            }
        }
        Ok(())
    }

    /// Number of coupling nodes.
    pub fn depth(&self) -> u32 {
        match self {
            CouplingExpr::Harmonic { .. } => 0,
            CouplingExpr::Couple { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }
}

impl fmt::Display for CouplingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CouplingExpr::Harmonic { l, v } => write!(f, "Y[{l}]({v})"),
            CouplingExpr::Couple { left, right, l } => write!(f, "[{left} x {right}][{l}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("triangle rule fails: {l3} is not between |{l1}-{l2}| and {l1}+{l2}")]
    Triangle { l1: u32, l2: u32, l3: u32 },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Which scalar a trace entry records.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorStep {
    /// `q` for an even coupling node.
    Even { l1: u32, l2: u32, l3: u32 },
    /// `r` for an odd coupling node.
    Odd { l1: u32, l2: u32, l3: u32 },
    /// `S(L)` for the final contraction to a scalar.
    Scalar { rank: u32 },
    /// `n_L` for a tensor-valued result.
    CartesianRescale { rank: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorRecord {
    pub step: FactorStep,
    pub factor: CoeffAtom,
}

impl fmt::Display for FactorRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.step {
            FactorStep::Even { l1, l2, l3 } => write!(f, "q({l1},{l2},{l3}) = {}", self.factor),
            FactorStep::Odd { l1, l2, l3 } => write!(f, "r({l1},{l2},{l3}) = {}", self.factor),
            FactorStep::Scalar { rank } => write!(f, "S({rank}) = {}", self.factor),
            FactorStep::CartesianRescale { rank } => write!(f, "n({rank}) = {}", self.factor),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionResult {
    pub expr: CouplingExpr,
    /// Product of all trace factors.
    pub prefactor: CoeffAtom,
    /// Rational-coefficient tensor; the value is `prefactor · poly`.
    pub poly: TensorPoly,
    pub parity: Parity,
    pub factor_trace: Vec<FactorRecord>,
}

impl ReductionResult {
    pub fn rank(&self) -> u32 {
        self.poly.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Terms with their full coefficients.
    pub fn terms(&self) -> Vec<(CoeffAtom, Monomial)> {
        self.poly
            .terms()
            .map(|(m, c)| (self.prefactor.scale(c), m.clone()))
            .collect()
    }

    /// The scalar value as a polynomial in dots and boxes.
    pub fn to_scalar_poly(&self) -> Option<ScalarPoly> {
        (self.rank() == 0).then(|| ScalarPoly::from_tensor(&self.poly, &self.prefactor))
    }

    /// Prefactor with the rational content of `poly` pulled in, and the
    /// remaining primitive polynomial.
    pub fn factored(&self) -> (CoeffAtom, TensorPoly) {
        let content = self.poly.content();
        (self.prefactor.scale(&content), self.poly.scale(&content.recip()))
    }
}

fn hat(l: u32) -> Rational {
    Rational::from_integer((2 * l + 1).into())
}

fn root(r: Rational) -> CoeffAtom {
    CoeffAtom::sqrt(r).expect("positive")
}

fn inv_sqrt_4pi() -> CoeffAtom {
    CoeffAtom::pi_pow_half(-1).scale(&Rational::new(1.into(), 2.into()))
}

fn abs_atom(a: CoeffAtom) -> CoeffAtom {
    if a.rat() < &Rational::from_integer(0.into()) {
        a.neg()
    } else {
        a
    }
}

/// `l̂1 l̂2 /√(4π) · |(l1 l2 l3; 0 0 0)|`
pub fn q_factor(l1: u32, l2: u32, l3: u32) -> CoeffAtom {
    let tj = three_j(ThreeJArgs::new([l1 as i64, l2 as i64, l3 as i64], [0, 0, 0]));
    root(hat(l1) * hat(l2)).mul(&inv_sqrt_4pi()).mul(&abs_atom(tj))
}

/// `l̂1 l̂2 /√(4π) · √(l1(l1+1) l2(l2+1) / (4 l3²)) · |(l1 l2 l3; 1 -1 0)|`
pub fn r_factor(l1: u32, l2: u32, l3: u32) -> CoeffAtom {
    let tj = three_j(ThreeJArgs::new([l1 as i64, l2 as i64, l3 as i64], [1, -1, 0]));
    let (a, b, c) = (l1 as i64, l2 as i64, l3 as i64);
    let ang = Rational::new((a * (a + 1) * b * (b + 1)).into(), (4 * c * c).into());
    root(hat(l1) * hat(l2) * ang).mul(&inv_sqrt_4pi()).mul(&abs_atom(tj))
}

/// `L̂/(4π) · L!/(2L-1)!!`
pub fn s_factor(big_l: u32) -> CoeffAtom {
    let l = big_l as i64;
    root(hat(big_l))
        .mul(&CoeffAtom::pi_pow_half(-2))
        .scale(&(Rational::new(fact(l), dfact(2 * l - 1)) / Rational::from_integer(4.into())))
}

/// `n_l = l̂/√(4π) · √(l!/(2l-1)!!)`, the scale with `Y^{l}(a) = n_l a^{l}`.
pub fn cartesian_rescale(l: u32) -> CoeffAtom {
    let li = l as i64;
    root(hat(l) * Rational::new(fact(li), dfact(2 * li - 1))).mul(&inv_sqrt_4pi())
}

fn reduce_node(e: &CouplingExpr, trace: &mut Vec<FactorRecord>) -> Result<(CoeffAtom, TensorPoly), ReduceError> {
    match e {
        CouplingExpr::Harmonic { l, v } => Ok((CoeffAtom::one(), harmonic_tensor(v, *l))),
        CouplingExpr::Couple { left, right, l } => {
            let (cr, tr) = reduce_node(right, trace)?;
            let (cl, tl) = reduce_node(left, trace)?;
            let (l1, l2, l3) = (tl.rank(), tr.rank(), *l);
            if !triangle(l1 as i64, l2 as i64, l3 as i64) {
                return Err(ReduceError::Triangle { l1, l2, l3 });
            }
            let (factor, t, step) = if (l1 + l2 + l3) % 2 == 0 {
                (
                    q_factor(l1, l2, l3),
                    couple_even(&tl, &tr, l3)?,
                    FactorStep::Even { l1, l2, l3 },
                )
            } else {
                (
                    r_factor(l1, l2, l3),
                    couple_odd(&tl, &tr, l3)?,
                    FactorStep::Odd { l1, l2, l3 },
                )
            };
            trace.push(FactorRecord {
                step,
                factor: factor.clone(),
            });
            Ok((cl.mul(&cr).mul(&factor), t))
        }
    }
}

/// Reduces a coupling expression to Cartesian form.
pub fn reduce(expr: &CouplingExpr) -> Result<ReductionResult, ReduceError> {
    expr.validate()?;
    let mut trace = Vec::new();
    let (prefactor, poly) = match expr {
        CouplingExpr::Couple { left, right, l: 0 } => {
            let (cr, tr) = reduce_node(right, &mut trace)?;
            let (cl, tl) = reduce_node(left, &mut trace)?;
            let big_l = tl.rank();
            let s = s_factor(big_l);
            trace.push(FactorRecord {
                step: FactorStep::Scalar { rank: big_l },
                factor: s.clone(),
            });
            (cl.mul(&cr).mul(&s), tl.full_contract(&tr)?)
        }
        _ => {
            let (c, t) = reduce_node(expr, &mut trace)?;
            let n = cartesian_rescale(t.rank());
            trace.push(FactorRecord {
                step: FactorStep::CartesianRescale { rank: t.rank() },
                factor: n.clone(),
            });
            (c.mul(&n), t)
        }
    };
    let (prefactor, poly) = if poly.is_zero() {
        (CoeffAtom::zero(), poly)
    } else {
        (prefactor, poly)
    };
    Ok(ReductionResult {
        expr: expr.clone(),
        prefactor,
        poly,
        parity: expr.parity(),
        factor_trace: trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rat};

    #[test]
    fn factor_values() {
        // q(1,1,2) = 3/√4π · √(2/15)
        let q = q_factor(1, 1, 2);
        assert!(
            (q.to_f64().unwrap() - 3.0 / (4.0 * std::f64::consts::PI).sqrt() * (2.0f64 / 15.0).sqrt()).abs() < 1e-14
        );
        // r(2,2,1) = √(15/2)/√4π
        assert_eq!(r_factor(2, 2, 1), root(rat(15, 2)).mul(&inv_sqrt_4pi()));
        assert_eq!(s_factor(0), CoeffAtom::pi_pow_half(-2).scale(&rat(1, 4)));
        assert_eq!(cartesian_rescale(0), inv_sqrt_4pi());
        assert_eq!(
            cartesian_rescale(1).pow(2).unwrap(),
            CoeffAtom::pi_pow_half(-2).scale(&rat(3, 4))
        );
    }

    #[test]
    fn scalar_step_matches_rank_zero_coupling() {
        for l in 0..=6 {
            let via_q = cartesian_rescale(0)
                .mul(&q_factor(l, l, 0))
                .scale(&crate::tensor::even_normalization(l, l, 0).unwrap());
            assert_eq!(via_q, s_factor(l), "L = {l}");
        }
    }

    #[test]
    fn two_vector_scalar() {
        // [Y1(a) x Y1(b)][0] = √3/(4π) (a·b)
        let e = CouplingExpr::couple(CouplingExpr::harmonic(1, "a"), CouplingExpr::harmonic(1, "b"), 0);
        let r = reduce(&e).unwrap();
        let (c, p) = r.factored();
        assert_eq!(p.len(), 1);
        assert_eq!(c, CoeffAtom::pi_pow_half(-2).mul(&root(int(3))).scale(&rat(1, 4)));
    }

    #[test]
    fn triangle_violation_is_an_error() {
        let e = CouplingExpr::couple(CouplingExpr::harmonic(1, "a"), CouplingExpr::harmonic(1, "b"), 3);
        assert_eq!(reduce(&e), Err(ReduceError::Triangle { l1: 1, l2: 1, l3: 3 }));
    }

    #[test]
    fn odd_scalar_has_one_box_per_term() {
        let inner = CouplingExpr::couple(CouplingExpr::harmonic(1, "a"), CouplingExpr::harmonic(1, "b"), 1);
        let e = CouplingExpr::couple(inner, CouplingExpr::harmonic(1, "c"), 0);
        let r = reduce(&e).unwrap();
        assert_eq!(r.parity, Parity::Odd);
        assert!(!r.is_zero());
        assert!(r.poly.terms().all(|(m, _)| m.boxes.len() == 1));
    }
}
