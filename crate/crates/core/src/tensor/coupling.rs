//! Coupling of two symmetric traceless tensors to a definite rank.
//!
//! For ranks `l1, l2` and target `l3`, the even case (`l1+l2+l3` even) is
//! `Q = N_Q Σ_r (-1)^r 2^r (2l3-2r-1)!!/(2l3-1)!! {A·(k+r)B δ^r}` with
//! `k = (l1+l2-l3)/2`, and the odd case replaces the core by
//! `ε : A·(k'+r)B` with `k' = (l1+l2-l3-1)/2`. The braces sum over distinct
//! placements of the output slots. `N_Q` and `N_R` make `Q(a,a) = a^{l3}`
//! and `R(a,b)·a^{l3-1} → a×b` as `b → a`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{
    distribution_count, distributions, harmonic_tensor, sign_pow, vector_power, Leg, Monomial, TensorError, TensorPoly,
    VectorSymbol,
};
use crate::coeff::{dfact, fact, CoeffAtom, Rational};
use crate::wigner::triangle;

fn check(l1: u32, l2: u32, l3: u32, odd: bool) -> Result<(), TensorError> {
    if !triangle(l1 as i64, l2 as i64, l3 as i64) {
        return Err(TensorError::Triangle(l1, l2, l3));
    }
    let is_odd = (l1 + l2 + l3) % 2 == 1;
    if is_odd != odd {
        return Err(TensorError::Parity(l1, l2, l3, if is_odd { "odd" } else { "even" }));
    }
    Ok(())
}

/// `(2l3-2r-1)!! / (2l3-1)!! · (-2)^r`
fn reduction_weight(l3: u32, r: u32) -> Rational {
    sign_pow(r)
        * Rational::from_integer(BigInt::one() << r)
        * Rational::new(dfact(2 * l3 as i64 - 2 * r as i64 - 1), dfact(2 * l3 as i64 - 1))
}

/// Spreads a core tensor over `l3` output slots. Core slots are split into
/// consecutive groups of the given sizes; each placement assigns output
/// slots to the groups and joins the rest by `r` deltas.
fn spread(core: &TensorPoly, sizes: &[usize], r: usize, l3: u32, weight: &Rational, out: &mut TensorPoly) {
    let slots: Vec<u32> = (0..l3).collect();
    let ds = distributions(&slots, sizes, r);
    assert_eq!(
        BigInt::from(ds.len()),
        distribution_count(l3 as usize, sizes, r),
        "coupling placement count"
    );
    for d in ds {
        let target: Vec<u32> = d.groups.iter().flatten().copied().collect();
        let mut deltas: Vec<(u32, u32)> = d.pairs.iter().map(|&(s, t)| (s.min(t), s.max(t))).collect();
        deltas.sort();
        for (m, c) in core.terms() {
            let (mut m2, odd) = m.relabeled(|s| target[s as usize]);
            m2.deltas.extend(deltas.iter().copied());
            m2.deltas.sort();
            let c = c * weight;
            out.add_term(m2, if odd { -c } else { c });
        }
    }
}

fn sum_even(a: &TensorPoly, b: &TensorPoly, l3: u32) -> TensorPoly {
    let (l1, l2) = (a.rank(), b.rank());
    let k = (l1 + l2 - l3) / 2;
    let mut out = TensorPoly::zero(l3);
    for r in 0..=(l1 - k).min(l2 - k) {
        let core = a.contract(b, k + r).expect("ranks checked");
        let sizes = [(l1 - k - r) as usize, (l2 - k - r) as usize];
        spread(&core, &sizes, r as usize, l3, &reduction_weight(l3, r), &mut out);
    }
    out
}

fn epsilon() -> TensorPoly {
    let mut e = TensorPoly::zero(3);
    e.add_term(
        Monomial {
            eps: vec![[Leg::Slot(0), Leg::Slot(1), Leg::Slot(2)]],
            ..Monomial::default()
        },
        Rational::one(),
    );
    e
}

fn sum_odd(a: &TensorPoly, b: &TensorPoly, l3: u32) -> TensorPoly {
    let (l1, l2) = (a.rank(), b.rank());
    let kp = (l1 + l2 - l3 - 1) / 2;
    // ε_{s p q} A_{p…}: slots [s, q, rest of A]; move q last.
    let ea = epsilon()
        .permute_slots(&[0, 2, 1])
        .contract(a, 1)
        .expect("rank of A is at least one");
    let perm: Vec<u32> = (0..=l1)
        .map(|s| match s {
            0 => 0,
            1 => l1,
            s => s - 1,
        })
        .collect();
    let ea = ea.permute_slots(&perm);
    let mut out = TensorPoly::zero(l3);
    for r in 0..=(l1 - kp - 1).min(l2 - kp - 1) {
        let core = ea.contract(b, kp + r + 1).expect("ranks checked");
        let sizes = [1, (l1 - 1 - kp - r) as usize, (l2 - 1 - kp - r) as usize];
        spread(&core, &sizes, r as usize, l3, &reduction_weight(l3, r), &mut out);
    }
    out
}

/// `l1! l2! (2l3-1)!! ((J1+1)/2)! ((J2+1)/2)! / (l3! J1!! J2!! J3!! (J/2)!)`
/// with `J = l1+l2+l3`, `Ji = J - 2li - 1`.
pub fn even_normalization(l1: u32, l2: u32, l3: u32) -> Result<Rational, TensorError> {
    check(l1, l2, l3, false)?;
    let (l1, l2, l3) = (l1 as i64, l2 as i64, l3 as i64);
    let j = l1 + l2 + l3;
    let (j1, j2, j3) = (j - 2 * l1 - 1, j - 2 * l2 - 1, j - 2 * l3 - 1);
    Ok(Rational::new(
        fact(l1) * fact(l2) * dfact(2 * l3 - 1) * fact((j1 + 1) / 2) * fact((j2 + 1) / 2),
        fact(l3) * dfact(j1) * dfact(j2) * dfact(j3) * fact(j / 2),
    ))
}

static ODD_NORM: OnceLock<Mutex<HashMap<(u32, u32, u32), Rational>>> = OnceLock::new();

/// Fixed by the limit `R(a,b)·a^{⊗(l3-1)} → a×b` as `b → a`.
pub fn odd_normalization(l1: u32, l2: u32, l3: u32) -> Result<Rational, TensorError> {
    check(l1, l2, l3, true)?;
    let cache = ODD_NORM.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(n) = cache.lock().unwrap().get(&(l1, l2, l3)) {
        return Ok(n.clone());
    }
    let a = VectorSymbol::new("a");
    let b = VectorSymbol::new("b");
    let raw = sum_odd(&harmonic_tensor(&a, l1), &harmonic_tensor(&b, l2), l3);
    let f = raw.contract(&vector_power(&a, l3 - 1), l3 - 1).expect("rank l3");
    let cross = [Leg::Slot(0), Leg::Vec(a.clone()), Leg::Vec(b.clone())];
    let mut at_one = Rational::zero();
    for (m, c) in f.terms() {
        assert!(
            m.vectors.is_empty() && m.deltas.is_empty() && m.boxes.is_empty() && m.eps == [cross.clone()],
            "odd coupling of two vectors is along a×b"
        );
        at_one += c;
    }
    assert!(!at_one.is_zero(), "odd coupling vanishes identically");
    let n = at_one.recip();
    cache.lock().unwrap().insert((l1, l2, l3), n.clone());
    Ok(n)
}

/// `Q(A, B)` for `l1+l2+l3` even.
pub fn couple_even(a: &TensorPoly, b: &TensorPoly, l3: u32) -> Result<TensorPoly, TensorError> {
    let n = even_normalization(a.rank(), b.rank(), l3)?;
    Ok(sum_even(a, b, l3).scale(&n))
}

/// `R(A, B)` for `l1+l2+l3` odd.
pub fn couple_odd(a: &TensorPoly, b: &TensorPoly, l3: u32) -> Result<TensorPoly, TensorError> {
    let n = odd_normalization(a.rank(), b.rank(), l3)?;
    Ok(sum_odd(a, b, l3).scale(&n))
}

/// `l̂3 √[(2l1)!(2l2)!(2l3)! / ((J1+1)!(J2+1)!(J3+1)!(J+1)!)]`, the scale
/// between coupled harmonic tensors and the raw Cartesian coupling.
pub fn couple_raw_c(l1: u32, l2: u32, l3: u32) -> Result<CoeffAtom, TensorError> {
    check(l1, l2, l3, false)?;
    Ok(raw_scale(l1, l2, l3))
}

/// Odd-parity counterpart of [`couple_raw_c`]; same closed form.
pub fn couple_raw_d(l1: u32, l2: u32, l3: u32) -> Result<CoeffAtom, TensorError> {
    check(l1, l2, l3, true)?;
    Ok(raw_scale(l1, l2, l3))
}

fn raw_scale(l1: u32, l2: u32, l3: u32) -> CoeffAtom {
    let (l1, l2, l3) = (l1 as i64, l2 as i64, l3 as i64);
    let j = l1 + l2 + l3;
    let (j1, j2, j3) = (j - 2 * l1 - 1, j - 2 * l2 - 1, j - 2 * l3 - 1);
    let r = Rational::new(
        BigInt::from(2 * l3 + 1) * fact(2 * l1) * fact(2 * l2) * fact(2 * l3),
        fact(j1 + 1) * fact(j2 + 1) * fact(j3 + 1) * fact(j + 1),
    );
    CoeffAtom::sqrt(r).expect("positive")
}

/// `[A × B]^{l3}` in Cartesian form: returns `(scale, tensor)`, where
/// `tensor` is the unnormalized placement sum.
pub fn cartesian_coupling(a: &TensorPoly, b: &TensorPoly, l3: u32) -> Result<(CoeffAtom, TensorPoly), TensorError> {
    let (l1, l2) = (a.rank(), b.rank());
    let (i1, i2, i3) = (l1 as i64, l2 as i64, l3 as i64);
    if (l1 + l2 + l3) % 2 == 0 {
        let c = couple_raw_c(l1, l2, l3)?;
        let j = i1 + i2 + i3;
        let bracket = Rational::new(fact((j - 2 * i2) / 2) * fact((j - 2 * i1) / 2), fact(i3));
        Ok((c.scale(&bracket), sum_even(a, b, l3)))
    } else {
        let d = couple_raw_d(l1, l2, l3)?;
        let bracket = Rational::new(fact((i1 - i2 + i3 - 1) / 2) * fact((i2 - i1 + i3 - 1) / 2), fact(i3));
        let half = CoeffAtom::sqrt(Rational::new(1.into(), 2.into())).expect("positive");
        Ok((d.scale(&bracket).mul(&half), sum_odd(a, b, l3)))
    }
}

/// `K` in `[a^{l1} × a^{l2}]^{l3} = C K a^{l3}`:
/// `J1!! J2!! J3!! (J/2)! / (l1! l2! (2l3-1)!!)`.
pub fn same_vector_proportionality(l1: u32, l2: u32, l3: u32) -> Result<Rational, TensorError> {
    check(l1, l2, l3, false)?;
    let (l1, l2, l3) = (l1 as i64, l2 as i64, l3 as i64);
    let j = l1 + l2 + l3;
    let (j1, j2, j3) = (j - 2 * l1 - 1, j - 2 * l2 - 1, j - 2 * l3 - 1);
    Ok(Rational::new(
        dfact(j1) * dfact(j2) * dfact(j3) * fact(j / 2),
        fact(l1) * fact(l2) * dfact(2 * l3 - 1),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rat};

    fn a() -> VectorSymbol {
        VectorSymbol::new("a")
    }
    fn b() -> VectorSymbol {
        VectorSymbol::new("b")
    }

    fn triples(max: u32, odd: bool) -> Vec<(u32, u32, u32)> {
        let mut v = Vec::new();
        for l1 in 0..=max {
            for l2 in 0..=max {
                for l3 in 0..=max {
                    if triangle(l1 as i64, l2 as i64, l3 as i64) && ((l1 + l2 + l3) % 2 == 1) == odd {
                        v.push((l1, l2, l3));
                    }
                }
            }
        }
        v
    }

    #[test]
    fn even_normalization_values() {
        assert_eq!(even_normalization(1, 1, 2).unwrap(), rat(3, 4));
        assert_eq!(even_normalization(2, 2, 2).unwrap(), int(1));
        assert_eq!(even_normalization(1, 3, 2).unwrap(), int(1));
        for l in 0..=6 {
            assert_eq!(
                even_normalization(l, l, 0).unwrap(),
                Rational::new(fact(l as i64), dfact(2 * l as i64 - 1))
            );
        }
    }

    #[test]
    fn rank_two_from_two_vectors() {
        // Q(a,b) = (3/4)(ab + ba) - (1/2)(a·b)δ
        let q = couple_even(&harmonic_tensor(&a(), 1), &harmonic_tensor(&b(), 1), 2).unwrap();
        assert_eq!(q.len(), 3);
        let ab = Monomial {
            vectors: vec![(a(), 0), (b(), 1)],
            ..Monomial::default()
        };
        let ba = Monomial {
            vectors: vec![(b(), 0), (a(), 1)],
            ..Monomial::default()
        };
        let mut dot = Monomial {
            deltas: vec![(0, 1)],
            ..Monomial::default()
        };
        dot.dots.insert((a(), b()), 1);
        assert_eq!(q.coefficient(&ab), rat(3, 4));
        assert_eq!(q.coefficient(&ba), rat(3, 4));
        assert_eq!(q.coefficient(&dot), rat(-1, 2));
    }

    #[test]
    fn even_coupling_of_same_vector_is_harmonic() {
        for (l1, l2, l3) in triples(4, false) {
            let q = couple_even(&harmonic_tensor(&a(), l1), &harmonic_tensor(&a(), l2), l3).unwrap();
            assert_eq!(q, harmonic_tensor(&a(), l3), "({l1},{l2},{l3})");
        }
    }

    #[test]
    fn couplings_are_symmetric_and_traceless() {
        for (l1, l2, l3) in triples(3, false) {
            let q = couple_even(&harmonic_tensor(&a(), l1), &harmonic_tensor(&b(), l2), l3).unwrap();
            assert!(q.is_symmetric() && q.is_traceless(), "Q ({l1},{l2},{l3})");
        }
        for (l1, l2, l3) in triples(3, true) {
            let r = couple_odd(&harmonic_tensor(&a(), l1), &harmonic_tensor(&b(), l2), l3).unwrap();
            assert!(r.is_symmetric() && r.is_traceless(), "R ({l1},{l2},{l3})");
        }
    }

    #[test]
    fn odd_rank_one_from_rank_two() {
        // R(a,b) = (a·b)(a×b) for two rank-2 harmonics.
        let r = couple_odd(&harmonic_tensor(&a(), 2), &harmonic_tensor(&b(), 2), 1).unwrap();
        let mut m = Monomial {
            eps: vec![[Leg::Slot(0), Leg::Vec(a()), Leg::Vec(b())]],
            ..Monomial::default()
        };
        m.dots.insert((a(), b()), 1);
        assert_eq!(r.len(), 1);
        assert_eq!(r.coefficient(&m), int(1));
    }

    #[test]
    fn raw_scale_values() {
        assert_eq!(couple_raw_c(1, 1, 2).unwrap(), CoeffAtom::one());
        assert_eq!(couple_raw_c(1, 1, 0).unwrap(), CoeffAtom::sqrt(rat(1, 3)).unwrap());
        assert!(couple_raw_c(1, 1, 1).is_err());
        assert!(couple_raw_d(1, 1, 1).is_ok());
    }

    #[test]
    fn same_vector_cartesian_coupling() {
        for (l1, l2, l3) in triples(4, false) {
            let (scale, t) = cartesian_coupling(&harmonic_tensor(&a(), l1), &harmonic_tensor(&a(), l2), l3).unwrap();
            let k = same_vector_proportionality(l1, l2, l3).unwrap();
            let expected = couple_raw_c(l1, l2, l3).unwrap().scale(&k);
            // t = μ a^{l3} for a rational μ.
            let h = harmonic_tensor(&a(), l3);
            let (m0, c0) = h.terms().next().unwrap();
            let mu = t.coefficient(m0) / c0;
            assert_eq!(t, h.scale(&mu));
            assert_eq!(scale.scale(&mu), expected, "({l1},{l2},{l3})");
        }
    }

    #[test]
    fn odd_sum_follows_epsilon_colon_convention() {
        // (ε:AB)_s = ε_{s p q} A_p B_q
        let (_, t) = cartesian_coupling(&harmonic_tensor(&a(), 1), &harmonic_tensor(&b(), 1), 1).unwrap();
        let mut want = TensorPoly::zero(1);
        want.add_term(
            Monomial {
                eps: vec![[Leg::Slot(0), Leg::Vec(a()), Leg::Vec(b())]],
                ..Monomial::default()
            },
            Rational::one(),
        );
        assert_eq!(t, want);
        for (l1, l2, l3) in triples(4, true) {
            if l1 > 0 && l2 > 0 {
                assert!(
                    odd_normalization(l1, l2, l3).unwrap() > Rational::zero(),
                    "({l1},{l2},{l3})"
                );
            }
        }
    }
}
