use num_bigint::BigInt;

use super::{distribution_count, distributions, sign_pow, Monomial, TensorPoly, VectorSymbol};
use crate::coeff::{dfact, fact, Rational};

/// `v ⊗ v ⊗ … ⊗ v` with `n` factors.
pub fn vector_power(v: &VectorSymbol, n: u32) -> TensorPoly {
    let mut p = TensorPoly::zero(n);
    let m = Monomial {
        vectors: (0..n).map(|s| (v.clone(), s)).collect(),
        ..Monomial::default()
    };
    p.add_term(m, Rational::from_integer(1.into()));
    p
}

/// The harmonic tensor `v^{l}`: symmetric, traceless, with
/// `v^{l} · w⊗…⊗w = P_l(v·w)`.
///
/// `v^{l} = Σ_r (-1)^r (2l-2r-1)!!/l! {v^{l-2r} δ^r}` where the braces sum
/// over the distinct placements of slots.
pub fn harmonic_tensor(v: &VectorSymbol, l: u32) -> TensorPoly {
    let mut p = TensorPoly::zero(l);
    let slots: Vec<u32> = (0..l).collect();
    for r in 0..=l / 2 {
        let nv = (l - 2 * r) as usize;
        let coeff = sign_pow(r) * Rational::new(dfact(2 * l as i64 - 2 * r as i64 - 1), fact(l as i64));
        let ds = distributions(&slots, &[nv], r as usize);
        assert_eq!(
            BigInt::from(ds.len()),
            distribution_count(l as usize, &[nv], r as usize),
            "harmonic placement count"
        );
        for d in ds {
            let mut m = Monomial {
                vectors: d.groups[0].iter().map(|&s| (v.clone(), s)).collect(),
                deltas: d.pairs.iter().map(|&(s, t)| (s.min(t), s.max(t))).collect(),
                ..Monomial::default()
            };
            m.deltas.sort();
            p.add_term(m, coeff.clone());
        }
    }
    p
}
